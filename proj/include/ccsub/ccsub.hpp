#pragma once

#include "ccsub/jet.hpp"
#include "ccsub/error.hpp"
#include "ccsub/linalg.hpp"
#include "ccsub/field.hpp"
#include "ccsub/chart.hpp"
#include "ccsub/structures.hpp"
#include "ccsub/frame.hpp"
#include "ccsub/connection.hpp"
#include "ccsub/contact.hpp"
#include "ccsub/submersion.hpp"
#include "ccsub/identities.hpp"
#include "ccsub/sampling.hpp"
#include "ccsub/catalog.hpp"
#include "ccsub/report.hpp"
