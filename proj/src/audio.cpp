// src/audio.cpp

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

#include "csforge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string>

#include "csforge/error.hpp"

namespace csforge {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void put_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>(v >> 8));
}

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
  }
}

void put_tag(std::vector<unsigned char>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

double decode_sample(const unsigned char* p, std::uint16_t format,
                     std::uint16_t bits) {
  if (format == kFormatPcm) {
    switch (bits) {
      case 8:
        return (static_cast<int>(p[0]) - 128) / 128.0;
      case 16:
        return static_cast<std::int16_t>(read_u16(p)) / 32768.0;
      case 24: {
        std::int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000) v |= ~0xFFFFFF;
        return v / 8388608.0;
      }
      case 32:
        return static_cast<std::int32_t>(read_u32(p)) / 2147483648.0;
    }
  } else if (bits == 32) {
    float f;
    std::uint32_t raw = read_u32(p);
    std::memcpy(&f, &raw, sizeof f);
    return f;
  } else if (bits == 64) {
    std::uint64_t raw = static_cast<std::uint64_t>(read_u32(p)) |
                        (static_cast<std::uint64_t>(read_u32(p + 4)) << 32);
    double d;
    std::memcpy(&d, &raw, sizeof d);
    return d;
  }
  fail(ErrorCode::kMalformedWav,
       "unsupported sample format " + std::to_string(format) + "/" +
           std::to_string(bits) + " bit");
}

std::pair<std::size_t, std::size_t> span_to_indices(const TimeSpan& span,
                                                    std::size_t size,
                                                    int rate) {
  if (!(span.start_s >= 0.0) || !(span.end_s >= span.start_s)) {
    fail(ErrorCode::kSpanOutOfRange,
         "invalid span [" + std::to_string(span.start_s) + ", " +
             std::to_string(span.end_s) + "]");
  }
  std::size_t first = to_sample_index(span.start_s, rate);
  std::size_t last = to_sample_index(span.end_s, rate);
  if (last > size) {
    fail(ErrorCode::kSpanOutOfRange,
         "span end " + std::to_string(span.end_s) + " s exceeds buffer of " +
             std::to_string(static_cast<double>(size) / rate) + " s");
  }
  return {first, last};
}

}  // namespace

std::size_t to_sample_index(double seconds, int sample_rate) {
  return static_cast<std::size_t>(std::floor(seconds * sample_rate + 0.5));
}

AudioBuffer::AudioBuffer(std::vector<float> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (sample_rate_ <= 0) {
    fail(ErrorCode::kInvalidArgument,
         "sample rate must be positive, got " + std::to_string(sample_rate_));
  }
}

float AudioBuffer::peak() const {
  float p = 0.0f;
  for (float s : samples_) p = std::max(p, std::fabs(s));
  return p;
}

AudioBuffer decode_wav(std::span<const unsigned char> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail(ErrorCode::kMalformedWav, "missing RIFF/WAVE header");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    std::uint32_t chunk_size = read_u32(chunk + 4);
    std::size_t body = pos + 8;
    std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (chunk_size < 16 || chunk_size > available) {
        fail(ErrorCode::kMalformedWav, "truncated fmt chunk");
      }
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      if (format == kFormatExtensible) {
        if (chunk_size < 40) {
          fail(ErrorCode::kMalformedWav, "truncated extensible fmt chunk");
        }
        format = read_u16(f + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = bytes.data() + body;
      // Streaming writers leave 0 or 0xFFFFFFFF here; take what is present.
      data_size = std::min<std::size_t>(chunk_size, available);
      if (chunk_size == 0 || chunk_size == 0xFFFFFFFFu) data_size = available;
      if (have_fmt) break;
    }
    pos = body + chunk_size + (chunk_size & 1u);
  }

  if (!have_fmt) fail(ErrorCode::kMalformedWav, "missing fmt chunk");
  if (data == nullptr) fail(ErrorCode::kMalformedWav, "missing data chunk");
  if (format != kFormatPcm && format != kFormatFloat) {
    fail(ErrorCode::kMalformedWav,
         "unsupported codec " + std::to_string(format));
  }
  if (channels == 0 || rate == 0 || bits == 0 || bits % 8 != 0) {
    fail(ErrorCode::kMalformedWav, "invalid fmt fields");
  }

  const std::size_t width = bits / 8;
  const std::size_t frame = width * channels;
  const std::size_t frames = data_size / frame;
  std::vector<float> samples(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      sum += decode_sample(data + i * frame + c * width, format, bits);
    }
    samples[i] = static_cast<float>(sum / channels);
  }
  return AudioBuffer(std::move(samples), static_cast<int>(rate));
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorCode::kIoError, "read failed for " + path.string());
  try {
    return decode_wav(bytes);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kMalformedWav) throw;
    fail(ErrorCode::kMalformedWav, path.string() + ": " + e.what());
  }
}

std::vector<unsigned char> encode_wav(const AudioBuffer& buf) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(buf.size() * sizeof(std::int16_t));
  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate()));
  put_u32(out, static_cast<std::uint32_t>(buf.sample_rate()) * 2);
  put_u16(out, 2);
  put_u16(out, 16);
  put_tag(out, "data");
  put_u32(out, data_bytes);
  for (float s : buf.samples()) {
    double scaled = std::nearbyint(static_cast<double>(s) * 32768.0);
    scaled = std::clamp(scaled, -32768.0, 32767.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return out;
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
  const auto bytes = encode_wav(buf);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIoError, "write failed for " + path.string());
}

std::vector<Biquad> design_butterworth(FilterEdge edge, int order,
                                       double cutoff_hz, int sample_rate) {
  if (order < 2 || order % 2 != 0) {
    fail(ErrorCode::kInvalidArgument, "Butterworth order must be even");
  }
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double cw = std::cos(w0);
  const double sw = std::sin(w0);
  std::vector<Biquad> sections;
  for (int k = 0; k < order / 2; ++k) {
    // Pole-pair quality factors of the analog Butterworth prototype.
    const double q =
        1.0 / (2.0 * std::cos((2 * k + 1) * std::numbers::pi / (2.0 * order)));
    const double alpha = sw / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s;
    if (edge == FilterEdge::kLowpass) {
      s.b0 = (1.0 - cw) / 2.0 / a0;
      s.b1 = (1.0 - cw) / a0;
      s.b2 = s.b0;
    } else {
      s.b0 = (1.0 + cw) / 2.0 / a0;
      s.b1 = -(1.0 + cw) / a0;
      s.b2 = s.b0;
    }
    s.a1 = -2.0 * cw / a0;
    s.a2 = (1.0 - alpha) / a0;
    sections.push_back(s);
  }
  return sections;
}

AudioBuffer bandpass_filter(const AudioBuffer& buf, double low_hz,
                            double high_hz) {
  const double nyquist = buf.sample_rate() / 2.0;
  if (!(low_hz > 0.0) || !(low_hz < high_hz) || !(high_hz < nyquist)) {
    fail(ErrorCode::kInvalidCutoff,
         "need 0 < low_hz < high_hz < " + std::to_string(nyquist) +
             ", got " + std::to_string(low_hz) + " / " +
             std::to_string(high_hz));
  }
  std::vector<Biquad> sections = design_butterworth(
      FilterEdge::kHighpass, kBandpassEdgeOrder, low_hz, buf.sample_rate());
  auto lowpass = design_butterworth(FilterEdge::kLowpass, kBandpassEdgeOrder,
                                    high_hz, buf.sample_rate());
  sections.insert(sections.end(), lowpass.begin(), lowpass.end());

  // Transposed direct form II state, two registers per section.
  std::vector<double> z1(sections.size(), 0.0), z2(sections.size(), 0.0);
  std::vector<float> out(buf.size());
  auto in = buf.samples();
  for (std::size_t i = 0; i < in.size(); ++i) {
    double x = in[i];
    for (std::size_t k = 0; k < sections.size(); ++k) {
      const Biquad& s = sections[k];
      const double y = s.b0 * x + z1[k];
      z1[k] = s.b1 * x - s.a1 * y + z2[k];
      z2[k] = s.b2 * x - s.a2 * y;
      x = y;
    }
    out[i] = static_cast<float>(x);
  }
  return AudioBuffer(std::move(out), buf.sample_rate());
}

double dbfs_to_amplitude(double dbfs) { return std::pow(10.0, dbfs / 20.0); }

AudioBuffer normalize_amplitude(const AudioBuffer& buf,
                                double target_peak_dbfs) {
  if (buf.empty()) fail(ErrorCode::kEmptyBuffer, "cannot normalize 0 samples");
  const double peak = buf.peak();
  const double target = dbfs_to_amplitude(target_peak_dbfs);
  // Already at the target (as float): keep the buffer bit-exact, which also
  // makes normalization idempotent.
  if (peak == 0.0 || static_cast<float>(peak) == static_cast<float>(target)) {
    return buf;
  }
  const double gain = target / peak;
  std::vector<float> out(buf.size());
  auto in = buf.samples();
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = static_cast<float>(in[i] * gain);
  }
  return AudioBuffer(std::move(out), buf.sample_rate());
}

AudioBuffer clip_segment(const AudioBuffer& buf, const TimeSpan& span) {
  auto [first, last] = span_to_indices(span, buf.size(), buf.sample_rate());
  auto in = buf.samples();
  return AudioBuffer(std::vector<float>(in.begin() + first, in.begin() + last),
                     buf.sample_rate());
}

AudioBuffer splice(const AudioBuffer& base,
                   std::span<const Replacement> replacements,
                   const SpliceOptions& options) {
  const int rate = base.sample_rate();
  struct Cut {
    std::size_t first, last;
    const AudioBuffer* insert;
  };
  std::vector<Cut> cuts;
  cuts.reserve(replacements.size());
  std::size_t out_size = base.size();
  for (const auto& [span, repl] : replacements) {
    if (repl.sample_rate() != rate) {
      fail(ErrorCode::kRateMismatch,
           "replacement at " + std::to_string(repl.sample_rate()) +
               " Hz, base at " + std::to_string(rate) + " Hz");
    }
    auto [first, last] = span_to_indices(span, base.size(), rate);
    cuts.push_back({first, last, &repl});
    out_size = out_size - (last - first) + repl.size();
  }
  std::stable_sort(cuts.begin(), cuts.end(), [](const Cut& x, const Cut& y) {
    return x.first < y.first;
  });
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i].first < cuts[i - 1].last) {
      fail(ErrorCode::kOverlappingSpans,
           "span starting at sample " + std::to_string(cuts[i].first) +
               " overlaps the span ending at sample " +
               std::to_string(cuts[i - 1].last));
    }
  }

  const std::size_t fade =
      to_sample_index(std::clamp(options.crossfade_ms, 0.0, 1e6) / 1000.0, rate);
  auto src = base.samples();
  std::vector<float> out;
  out.reserve(out_size);
  std::size_t cursor = 0;
  for (const Cut& cut : cuts) {
    out.insert(out.end(), src.begin() + cursor, src.begin() + cut.first);
    const std::size_t region = out.size();
    auto ins = cut.insert->samples();
    out.insert(out.end(), ins.begin(), ins.end());
    cursor = cut.last;

    // Blend against the removed base material so the junctions stay
    // continuous; every blended sample lives inside the inserted region.
    const std::size_t n =
        std::min({fade, cut.last - cut.first, ins.size() / 2});
    for (std::size_t i = 0; i < n; ++i) {
      const double w = static_cast<double>(i + 1) / (n + 1);
      float& head = out[region + i];
      head = static_cast<float>((1.0 - w) * src[cut.first + i] + w * head);
      float& tail = out[region + ins.size() - n + i];
      tail = static_cast<float>((1.0 - w) * tail + w * src[cut.last - n + i]);
    }
  }
  out.insert(out.end(), src.begin() + cursor, src.end());
  return AudioBuffer(std::move(out), rate);
}

}  // namespace csforge
