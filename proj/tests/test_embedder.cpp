#include <doctest.h>

#include "cliquebed/embedder.hpp"
