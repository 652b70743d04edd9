#pragma once

#include "quadpart/error.hpp"
#include "quadpart/qfield.hpp"
#include "quadpart/cfrac.hpp"
#include "quadpart/indec.hpp"
#include "quadpart/partcount.hpp"
#include "quadpart/theorems.hpp"
#include "quadpart/serialize.hpp"
#include "quadpart/cache.hpp"
#include "quadpart/cli.hpp"
