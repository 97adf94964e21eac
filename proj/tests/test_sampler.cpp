#include <doctest.h>

#include "cliquebed/sampler.hpp"
