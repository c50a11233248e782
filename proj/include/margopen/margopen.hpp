#ifndef MARGOPEN_MARGOPEN_HPP
#define MARGOPEN_MARGOPEN_HPP

#include "couple.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "refine.hpp"
#include "space.hpp"
#include "verify.hpp"
#include "weakstar.hpp"

#endif  // MARGOPEN_MARGOPEN_HPP
