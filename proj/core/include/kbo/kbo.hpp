#pragma once

// Everything at once.
#include "kbo/chaining.hpp"
#include "kbo/counting.hpp"
#include "kbo/encodings.hpp"
#include "kbo/error.hpp"
#include "kbo/formula.hpp"
#include "kbo/isolation.hpp"
#include "kbo/lia.hpp"
#include "kbo/oracle.hpp"
#include "kbo/solver.hpp"
#include "kbo/term.hpp"
