#pragma once

#include "qcs/approx.hpp"
#include "qcs/circuit.hpp"
#include "qcs/config.hpp"
#include "qcs/gates.hpp"
#include "qcs/linalg.hpp"
#include "qcs/qstate.hpp"
#include "qcs/random.hpp"
#include "qcs/reversible.hpp"
#include "qcs/rng.hpp"
#include "qcs/synth.hpp"
#include "qcs/turing.hpp"
