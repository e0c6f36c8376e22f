#ifndef SZLAB_SZLAB_HPP
#define SZLAB_SZLAB_HPP

#include "szlab/core.hpp"
#include "szlab/grid.hpp"
#include "szlab/fft.hpp"
#include "szlab/projectors.hpp"
#include "szlab/snapshot.hpp"
#include "szlab/norms.hpp"
#include "szlab/stats.hpp"
#include "szlab/szego.hpp"
#include "szlab/resonant.hpp"
#include "szlab/halfwave.hpp"

#endif
