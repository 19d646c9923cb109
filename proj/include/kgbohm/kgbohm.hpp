// kgbohm.hpp: convenience header pulling in the whole library

#pragma once

#include "model.hpp"
#include "wavepacket.hpp"
#include "fields.hpp"
#include "weakvalues.hpp"
#include "quadrature.hpp"
#include "oracle.hpp"
#include "dynamics.hpp"
#include "relativity.hpp"
#include "io.hpp"
#include "render.hpp"
#include "commands.hpp"
#include "acceptance.hpp"
