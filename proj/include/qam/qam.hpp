#pragma once

// Umbrella header; pulls in the whole library.

#include <qam/cli.hpp>
#include <qam/csv.hpp>
#include <qam/errors.hpp>
#include <qam/format.hpp>
#include <qam/generator.hpp>
#include <qam/interval.hpp>
#include <qam/mean.hpp>
#include <qam/neutral.hpp>
#include <qam/rng.hpp>
#include <qam/scale_family.hpp>
#include <qam/serialization.hpp>
#include <qam/solver.hpp>
#include <qam/verify.hpp>
#include <qam/weighted_sample.hpp>
