#pragma once

#include "selfsim/activity.hpp"
#include "selfsim/alphabet.hpp"
#include "selfsim/automaton.hpp"
#include "selfsim/corpus.hpp"
#include "selfsim/criterion.hpp"
#include "selfsim/ends.hpp"
#include "selfsim/error.hpp"
#include "selfsim/growth.hpp"
#include "selfsim/io/automaton_format.hpp"
#include "selfsim/io/network_format.hpp"
#include "selfsim/network.hpp"
#include "selfsim/perm.hpp"
#include "selfsim/recurrence.hpp"
#include "selfsim/schreier.hpp"
#include "selfsim/wreath.hpp"
