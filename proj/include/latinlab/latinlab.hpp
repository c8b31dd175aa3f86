#pragma once

#include "latinlab/error.hpp"
#include "latinlab/rng.hpp"
#include "latinlab/cycles.hpp"
#include "latinlab/latin_square.hpp"
#include "latinlab/serialization.hpp"
#include "latinlab/box.hpp"
#include "latinlab/intercalates.hpp"
#include "latinlab/switchings.hpp"
#include "latinlab/twist.hpp"
#include "latinlab/permanent.hpp"
#include "latinlab/oracle.hpp"
#include "latinlab/sampler.hpp"
#include "latinlab/bounds.hpp"
#include "latinlab/discrepancy.hpp"
#include "latinlab/facts.hpp"
#include "latinlab/table.hpp"
#include "latinlab/config.hpp"
#include "latinlab/manifest.hpp"
#include "latinlab/cli.hpp"
