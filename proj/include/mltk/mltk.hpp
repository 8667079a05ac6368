#pragma once

#include "chain.hpp"
#include "cl.hpp"
#include "combinators.hpp"
#include "error.hpp"
#include "frame_io.hpp"
#include "random.hpp"
#include "reduction.hpp"
#include "semantics.hpp"
#include "syntax.hpp"
#include "term.hpp"
#include "translate.hpp"
#include "type.hpp"
