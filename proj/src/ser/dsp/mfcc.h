// ser/dsp/mfcc.h

// Copyright 2026  ser-duo contributors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "ser/dsp/wav.h"
#include "ser/numerics/matrix.h"

namespace ser::dsp {

struct MfccConfig {
  int frame_ms = 25;
  int hop_ms = 10;
  int mel_filters = 26;
  int num_ceps = 13;
  bool include_deltas = true;  // 13 -> 39 dims
  double log_floor = 1e-10;
};

// Feature rows are frames, columns are coefficients.
struct FeatureMatrix {
  numerics::Matrix values;
  int frames() const { return values.rows(); }
  int dim() const { return values.cols(); }
};

// Slices the waveform into Hann-windowed frames (one per row). Frame count
// is floor((N - win) / hop) + 1 with win/hop converted from ms at the
// waveform's rate. A waveform shorter than one frame raises DataError
// naming the minimum sample count.
numerics::Matrix frame_signal(const Waveform &w, const MfccConfig &cfg);

// Full MFCC pipeline: power spectrum (radix-2 FFT), triangular mel
// filterbank (2595*log10(1+f/700) scale), floored log, orthonormal DCT-II
// keeping num_ceps coefficients; deltas appended per config. Requires
// sample_rate 16000; ingestion is responsible for resampling.
FeatureMatrix mfcc(const Waveform &w, const MfccConfig &cfg = {});

// Appends delta and delta-delta rows of regression slope over +/-2 frames
// with edge replication; output dim is 3x input.
FeatureMatrix add_deltas(const FeatureMatrix &f);

}  // namespace ser::dsp
