#pragma once

// Frequency-domain identification of linear stationary models of multi-input
// control channels from single noisy almost-periodic records, plus the
// forward simulator and dataset synthesizer used to exercise it.

#include <fsid/apsignal.hpp>
#include <fsid/errors.hpp>
#include <fsid/freqalg.hpp>
#include <fsid/identify.hpp>
#include <fsid/pipeline.hpp>
#include <fsid/spectral.hpp>
