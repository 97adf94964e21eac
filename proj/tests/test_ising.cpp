#include <doctest.h>

#include "cliquebed/ising.hpp"
