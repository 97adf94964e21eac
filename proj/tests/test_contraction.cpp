#include <doctest.h>

#include "cliquebed/contraction.hpp"
