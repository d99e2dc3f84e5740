// ser/dsp/wav.h

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

#include <string>
#include <vector>

namespace ser::dsp {

struct Waveform {
  std::vector<double> samples;  // mono, nominally in [-1, 1]
  int sample_rate = 0;
};

// Minimal RIFF/WAVE reader: mono, PCM 16-bit or IEEE float 32-bit only.
// Anything else (stereo, other codecs, truncated chunks) raises DataError
// naming what was found.
Waveform read_wav(const std::string &path);

// Mono PCM 16-bit writer; samples are clamped to [-1, 1] first.
void write_wav_pcm16(const std::string &path, const Waveform &w);

// Linear-interpolation resampler. No anti-alias filtering, so downsampling
// wideband material will alias; good enough for speech ingestion where the
// corpus rate (48 kHz) is a clean multiple of the 16 kHz target.
Waveform resample_linear(const Waveform &w, int target_rate);

}  // namespace ser::dsp
