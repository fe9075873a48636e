// Copyright 2026 The sphdoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sphdoa/wav.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "sphdoa/geometry.hpp"

namespace sphdoa {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

static_assert(std::endian::native == std::endian::little,
              "WAV I/O assumes a little-endian host");

template <typename T>
T load(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void store(std::vector<std::uint8_t>& out, T v) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  out.insert(out.end(), b, b + sizeof(T));
}

void store_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

MultichannelSignal read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  const std::vector<std::uint8_t> buf{std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>()};
  auto fail = [&](const std::string& why) {
    return Error("'" + path + "': " + why);
  };
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0) {
    throw fail("not a RIFF/WAVE file");
  }

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const std::uint8_t* chunk = buf.data() + pos;
    const auto size = static_cast<std::size_t>(load<std::uint32_t>(chunk + 4));
    const std::size_t body = pos + 8;
    const std::size_t avail = std::min(size, buf.size() - body);
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (avail < 16) throw fail("truncated fmt chunk");
      format = load<std::uint16_t>(chunk + 8);
      channels = load<std::uint16_t>(chunk + 10);
      rate = load<std::uint32_t>(chunk + 12);
      bits = load<std::uint16_t>(chunk + 22);
      if (format == kFormatExtensible) {
        if (avail < 26) throw fail("truncated extensible fmt chunk");
        // First two bytes of the subformat GUID carry the format code.
        format = load<std::uint16_t>(chunk + 8 + 24);
      }
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = buf.data() + body;
      data_size = avail;
    }
    pos = body + size + (size & 1);
  }
  if (channels == 0) throw fail("missing fmt chunk");
  if (data == nullptr) throw fail("missing data chunk");

  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool float32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !float32) {
    throw fail("unsupported sample format (need 16-bit PCM or 32-bit float)");
  }
  const std::size_t width = bits / 8;
  const std::size_t frames = data_size / (width * channels);
  MultichannelSignal sig(channels, frames, static_cast<double>(rate));
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      const std::uint8_t* p = data + (t * channels + c) * width;
      sig.channel(c)[t] = pcm16 ? load<std::int16_t>(p) / 32768.0
                                : static_cast<double>(load<float>(p));
    }
  }
  return sig;
}

void write_wav(const std::string& path, const MultichannelSignal& sig) {
  if (sig.channels() == 0 || sig.channels() > 0xFFFF) {
    throw Error("cannot write a WAV with " + std::to_string(sig.channels()) +
                " channels");
  }
  const auto channels = static_cast<std::uint16_t>(sig.channels());
  const auto rate = static_cast<std::uint32_t>(sig.sample_rate());
  const std::uint64_t data_bytes =
      static_cast<std::uint64_t>(sig.length()) * channels * 4;
  if (data_bytes > 0xFFFFFFFFull - 64) throw Error("signal too long for WAV");

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(data_bytes) + 64);
  store_tag(out, "RIFF");
  store<std::uint32_t>(out, static_cast<std::uint32_t>(4 + 8 + 18 + 8 + data_bytes));
  store_tag(out, "WAVE");
  store_tag(out, "fmt ");
  store<std::uint32_t>(out, 18);
  store<std::uint16_t>(out, kFormatFloat);
  store<std::uint16_t>(out, channels);
  store<std::uint32_t>(out, rate);
  store<std::uint32_t>(out, rate * channels * 4u);
  store<std::uint16_t>(out, static_cast<std::uint16_t>(channels * 4));
  store<std::uint16_t>(out, 32);
  store<std::uint16_t>(out, 0);
  store_tag(out, "data");
  store<std::uint32_t>(out, static_cast<std::uint32_t>(data_bytes));
  for (std::size_t t = 0; t < sig.length(); ++t) {
    for (std::size_t c = 0; c < channels; ++c) {
      store<float>(out, static_cast<float>(sig.channel(c)[t]));
    }
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("write to '" + path + "' failed");
}

}  // namespace sphdoa
