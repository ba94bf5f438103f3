#pragma once

#include "finq/catalog.hpp"
#include "finq/harness.hpp"
#include "finq/liegroup.hpp"
#include "finq/linalg.hpp"
#include "finq/minkowski.hpp"
#include "finq/quotient.hpp"
#include "finq/rng.hpp"
