#pragma once

#include "pmc/rational.hpp"
#include "pmc/kernel.hpp"
#include "pmc/conditioning.hpp"
#include "pmc/diagram.hpp"
#include "pmc/edt.hpp"
#include "pmc/io.hpp"
#include "pmc/laws.hpp"
