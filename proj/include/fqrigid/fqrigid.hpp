#pragma once

#include "char_sum.hpp"
#include "clique.hpp"
#include "cyclotomic.hpp"
#include "directions.hpp"
#include "error.hpp"
#include "field.hpp"
#include "mult_structure.hpp"
#include "numtheory.hpp"
#include "rigidity_search.hpp"
