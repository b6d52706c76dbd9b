#pragma once

#include "konig/category.hpp"
#include "konig/diagram.hpp"
#include "konig/error.hpp"
#include "konig/expansion.hpp"
#include "konig/formula.hpp"
#include "konig/functor.hpp"
#include "konig/harness.hpp"
#include "konig/ramsey.hpp"
#include "konig/relstruct.hpp"
#include "konig/transfer.hpp"
#include "konig/version.hpp"
