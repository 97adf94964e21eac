#include <doctest.h>

#include "cliquebed/bench.hpp"
