// include/csforge/audio.hpp

// Copyright 2026  The csforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace csforge {

/// A half-open time interval in seconds. Conversion to sample indices rounds
/// half-up on each edge independently (see to_sample_index).
struct TimeSpan {
  double start_s = 0.0;
  double end_s = 0.0;

  double duration() const { return end_s - start_s; }
  bool operator==(const TimeSpan&) const = default;
};

/// floor(seconds * rate + 0.5). Aligner backends must use the same rule if
/// they hand out sample-exact spans.
std::size_t to_sample_index(double seconds, int sample_rate);

/// Mono waveform. Samples are nominally in [-1, 1]; only normalization
/// guarantees it. Buffers are values: every operation returns a new one.
class AudioBuffer {
 public:
  AudioBuffer() = default;
  AudioBuffer(std::vector<float> samples, int sample_rate);

  std::span<const float> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

  float peak() const;

  bool operator==(const AudioBuffer&) const = default;

 private:
  std::vector<float> samples_;
  int sample_rate_ = 16000;
};

// WAV I/O. Reading accepts 16/24/32-bit integer PCM and 32/64-bit float,
// any channel count (channels are averaged). Writing is always 16-bit mono.
AudioBuffer read_wav(const std::filesystem::path& path);
AudioBuffer decode_wav(std::span<const unsigned char> bytes);
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);
std::vector<unsigned char> encode_wav(const AudioBuffer& buf);

// One direct-form-I biquad section, a0 normalized to 1.
struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
};

enum class FilterEdge { kLowpass, kHighpass };

/// Butterworth low/highpass of even `order` as a cascade of order/2
/// bilinear-transformed biquads, prewarped at `cutoff_hz`.
std::vector<Biquad> design_butterworth(FilterEdge edge, int order,
                                       double cutoff_hz, int sample_rate);

/// Order of each edge of the preprocessing bandpass.
inline constexpr int kBandpassEdgeOrder = 8;

/// Causal Butterworth bandpass (highpass at low_hz cascaded with lowpass at
/// high_hz). Requires 0 < low_hz < high_hz < rate/2, else InvalidCutoff.
AudioBuffer bandpass_filter(const AudioBuffer& buf, double low_hz = 80.0,
                            double high_hz = 7000.0);

/// Peak normalization. All-zero input is returned unchanged.
AudioBuffer normalize_amplitude(const AudioBuffer& buf,
                                double target_peak_dbfs = -1.0);

double dbfs_to_amplitude(double dbfs);

AudioBuffer clip_segment(const AudioBuffer& buf, const TimeSpan& span);

struct SpliceOptions {
  double crossfade_ms = 0.0;
};

using Replacement = std::pair<TimeSpan, AudioBuffer>;

/// Removes every span from `base` and inserts its paired buffer in place.
/// Replacements may come in any order; overlapping spans are rejected.
/// Output length is exactly base - sum(spans) + sum(replacements) samples;
/// crossfading only blends samples inside each replacement region.
AudioBuffer splice(const AudioBuffer& base,
                   std::span<const Replacement> replacements,
                   const SpliceOptions& options = {});

}  // namespace csforge
