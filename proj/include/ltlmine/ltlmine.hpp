#pragma once

// Everything except the remote scorer, which pulls in POSIX process APIs.

#include "ltlmine/alphabet.hpp"
#include "ltlmine/buchi.hpp"
#include "ltlmine/check.hpp"
#include "ltlmine/concrete.hpp"
#include "ltlmine/dataset.hpp"
#include "ltlmine/decoding.hpp"
#include "ltlmine/enumerate.hpp"
#include "ltlmine/formula.hpp"
#include "ltlmine/metrics.hpp"
#include "ltlmine/miner.hpp"
#include "ltlmine/probe.hpp"
#include "ltlmine/syntax.hpp"
#include "ltlmine/trace.hpp"
#include "ltlmine/vocabulary.hpp"
