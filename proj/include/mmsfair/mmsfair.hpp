#pragma once

#include "mmsfair/bagfill.hpp"
#include "mmsfair/checks.hpp"
#include "mmsfair/errors.hpp"
#include "mmsfair/mms.hpp"
#include "mmsfair/model.hpp"
#include "mmsfair/normalize.hpp"
#include "mmsfair/ordering.hpp"
#include "mmsfair/pipeline.hpp"
#include "mmsfair/reduction.hpp"
#include "mmsfair/serialize.hpp"
#include "mmsfair/value.hpp"

#include "mmsfair/harness/bench.hpp"
#include "mmsfair/harness/generators.hpp"
#include "mmsfair/harness/io.hpp"
#include "mmsfair/harness/verify.hpp"
