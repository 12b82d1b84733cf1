#pragma once

#include "qi/bench.hpp"
#include "qi/bigint.hpp"
#include "qi/bits.hpp"
#include "qi/codec.hpp"
#include "qi/container.hpp"
#include "qi/error.hpp"
#include "qi/multialpha.hpp"
#include "qi/oracle.hpp"
#include "qi/qtable.hpp"
#include "qi/radix.hpp"
#include "qi/range_coder.hpp"
#include "qi/swi.hpp"
