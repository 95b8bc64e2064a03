// src/style_unify.cpp

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

#include "csforge/style_unify.hpp"

#include <cmath>

#include "csforge/error.hpp"

namespace csforge {

using nlohmann::json;

json make_vc_request(const AudioBuffer& input, const AudioBuffer& reference) {
  return json{{"kind", "vc"},
              {"sample_rate", input.sample_rate()},
              {"input_b64", protocol::encode_audio(input)},
              {"reference_b64", protocol::encode_audio(reference)}};
}

json make_vc_response(const AudioBuffer& output) {
  return json{{"audio_b64", protocol::encode_audio(output)},
              {"sample_rate", output.sample_rate()}};
}

AudioBuffer parse_vc_response(const json& response, int request_rate) {
  protocol::check_response(response);
  auto it = response.find("audio_b64");
  if (it == response.end() || !it->is_string()) {
    fail(ErrorCode::kBackendMalformedResponse, "vc response has no audio_b64");
  }
  int rate = request_rate;
  if (auto r = response.find("sample_rate"); r != response.end()) {
    if (!r->is_number_integer() || r->get<int>() <= 0) {
      fail(ErrorCode::kBackendMalformedResponse, "bad sample_rate in vc response");
    }
    rate = r->get<int>();
  }
  return protocol::decode_audio(it->get<std::string>(), rate);
}

AudioBuffer ProtocolConverter::convert(const AudioBuffer& input,
                                       const AudioBuffer& reference) {
  return parse_vc_response(channel_->exchange(make_vc_request(input, reference)),
                           input.sample_rate());
}

AudioBuffer pad_reference(const AudioBuffer& reference, double min_seconds) {
  if (reference.empty()) fail(ErrorCode::kEmptyBuffer, "empty reference");
  const auto want = static_cast<std::size_t>(
      std::ceil(min_seconds * reference.sample_rate()));
  if (reference.size() >= want) return reference;
  std::vector<float> out;
  out.reserve(want + reference.size());
  const auto src = reference.samples();
  while (out.size() < want) out.insert(out.end(), src.begin(), src.end());
  return AudioBuffer(std::move(out), reference.sample_rate());
}

AudioBuffer unify_style(ConverterBackend& backend, const VCRequest& req,
                        const StyleOptions& options) {
  if (req.input.sample_rate() != req.reference.sample_rate()) {
    fail(ErrorCode::kRateMismatch,
         "input at " + std::to_string(req.input.sample_rate()) +
             " Hz, reference at " + std::to_string(req.reference.sample_rate()) +
             " Hz");
  }
  if (req.input.empty()) fail(ErrorCode::kEmptyBuffer, "empty vc input");
  const AudioBuffer reference =
      pad_reference(req.reference, options.min_reference_s);
  const AudioBuffer out = backend.convert(req.input, reference);
  if (out.sample_rate() != req.input.sample_rate()) {
    fail(ErrorCode::kDegenerateConversion,
         "converter changed the rate to " + std::to_string(out.sample_rate()) +
             " Hz");
  }
  const double in_s = req.input.duration_seconds();
  const double out_s = out.duration_seconds();
  if (std::abs(out_s - in_s) > options.duration_tolerance * in_s) {
    fail(ErrorCode::kDegenerateConversion,
         "converter returned " + std::to_string(out_s) + " s for " +
             std::to_string(in_s) + " s of input");
  }
  return normalize_amplitude(out, options.target_peak_dbfs);
}

}  // namespace csforge
