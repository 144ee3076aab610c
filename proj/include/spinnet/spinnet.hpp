#pragma once

#include "spinnet/averaging/diffeo.hpp"
#include "spinnet/io/document.hpp"
#include "spinnet/network/builders.hpp"
#include "spinnet/network/canonicalize.hpp"
#include "spinnet/network/refinement.hpp"
#include "spinnet/section4/geometry.hpp"
#include "spinnet/state/inner_product.hpp"
