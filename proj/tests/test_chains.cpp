#include <doctest.h>

#include "cliquebed/chains.hpp"
