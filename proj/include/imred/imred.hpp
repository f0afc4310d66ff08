// imred/imred.hpp :: umbrella header

#ifndef IMRED_IMRED_HPP
#define IMRED_IMRED_HPP

#include "eval.hpp"
#include "family.hpp"
#include "formula.hpp"
#include "model.hpp"
#include "model_io.hpp"
#include "random.hpp"
#include "reduction.hpp"
#include "search.hpp"
#include "spiral.hpp"
#include "syntax.hpp"

#endif
