// include/csforge/style_unify.hpp

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

// Speaker-style unification of a spliced utterance through a voice
// conversion backend, followed by peak re-normalization.

#include <json.hpp>
#include <memory>

#include "csforge/audio.hpp"
#include "csforge/backend.hpp"

namespace csforge {

struct VCRequest {
  AudioBuffer input;      // spliced utterance
  AudioBuffer reference;  // target-speaker material (the matrix utterance)
};

struct StyleOptions {
  double target_peak_dbfs = -1.0;
  double min_reference_s = 2.0;
  double duration_tolerance = 0.10;  // relative to the input duration
};

class ConverterBackend {
 public:
  virtual ~ConverterBackend() = default;
  virtual AudioBuffer convert(const AudioBuffer& input,
                              const AudioBuffer& reference) = 0;
};

/// Reference converter: returns its input unchanged.
class IdentityConverter final : public ConverterBackend {
 public:
  AudioBuffer convert(const AudioBuffer& input, const AudioBuffer&) override {
    return input;
  }
};

class ProtocolConverter final : public ConverterBackend {
 public:
  explicit ProtocolConverter(std::unique_ptr<JsonChannel> channel)
      : channel_(std::move(channel)) {}
  AudioBuffer convert(const AudioBuffer& input,
                      const AudioBuffer& reference) override;

 private:
  std::unique_ptr<JsonChannel> channel_;
};

nlohmann::json make_vc_request(const AudioBuffer& input,
                               const AudioBuffer& reference);
nlohmann::json make_vc_response(const AudioBuffer& output);
/// A response may carry its own "sample_rate"; otherwise `request_rate` is
/// assumed. Throws BackendMalformedResponse on a wrong shape.
AudioBuffer parse_vc_response(const nlohmann::json& response, int request_rate);

/// Repeats `reference` end to end until it lasts at least `min_seconds`.
/// Throws EmptyBuffer on an empty reference.
AudioBuffer pad_reference(const AudioBuffer& reference, double min_seconds);

/// Converts req.input toward req.reference and re-normalizes the result to
/// the target peak. Throws RateMismatch when input and reference rates
/// differ and DegenerateConversion when the backend output changes rate or
/// its duration leaves the tolerance band.
AudioBuffer unify_style(ConverterBackend& backend, const VCRequest& req,
                        const StyleOptions& options = {});

}  // namespace csforge
