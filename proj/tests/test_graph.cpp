#include <doctest.h>

#include "cliquebed/graph.hpp"
