#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eop/bits.hpp"
#include "eop/cipher/trivium.hpp"
#include "eop/error.hpp"

namespace eop::cipher {

// Vector file format (see docs/vector-format.md):
//
//   # comment
//   name   = Set 1, vector 0
//   key    = 80000000000000000000
//   iv     = 00000000000000000000
//   stream = 38EB86FF730D7A9C...
//            AF8DF13A4420540D...     (continuation lines allowed)
//
// Blocks are separated by blank lines. Key and IV use the eSTREAM byte order:
// bytes reversed, MSB first, so key bit 0 is the top bit of the last byte.
// Keystream bytes are packed with the first keystream bit in the LSB.
struct TestVector {
  std::string name;
  Key80 key;
  Iv80 iv;
  std::vector<std::uint8_t> stream;
  int line = 0;
};

inline std::vector<std::uint8_t> parse_hex_bytes(const std::string& hex) {
  if (hex.size() % 2 != 0) throw ParameterError("odd number of hex digits");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    unsigned v = 0;
    std::istringstream in(hex.substr(2 * i, 2));
    if (!(in >> std::hex >> v) || !std::isxdigit(static_cast<unsigned char>(hex[2 * i])) ||
        !std::isxdigit(static_cast<unsigned char>(hex[2 * i + 1]))) {
      throw ParameterError("bad hex digit");
    }
    out[i] = static_cast<std::uint8_t>(v);
  }
  return out;
}

inline Key80 key_from_estream_hex(const std::string& hex) {
  const auto bytes = parse_hex_bytes(hex);
  if (bytes.size() != 10) throw ParameterError("key/iv must be 10 bytes");
  Key80 k;
  for (unsigned i = 0; i < 80; ++i) k.set(i, (bytes[9 - i / 8] >> (7 - i % 8)) & 1U);
  return k;
}

inline std::string key_to_estream_hex(const Key80& k) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::uint8_t bytes[10] = {};
  for (unsigned i = 0; i < 80; ++i) {
    if (k.test(i)) bytes[9 - i / 8] |= static_cast<std::uint8_t>(1U << (7 - i % 8));
  }
  std::string out;
  for (auto b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 15];
  }
  return out;
}

// Keystream bytes in the vector-file packing.
inline std::vector<std::uint8_t> keystream_bytes(const Key80& key, const Iv80& iv, std::size_t nbytes) {
  TriviumState s = trivium_init(key, iv);
  std::vector<std::uint8_t> out(nbytes);
  for (auto& byte : out) {
    const KeypadVector kv = s.next(8);
    std::uint8_t v = 0;
    for (unsigned j = 0; j < 8; ++j) v |= static_cast<std::uint8_t>(((kv.bits >> (7 - j)) & 1U) << j);
    byte = v;
  }
  return out;
}

inline std::vector<TestVector> read_test_vectors(std::istream& in) {
  std::vector<TestVector> out;
  std::optional<TestVector> cur;
  std::string stream_hex;
  bool have_key = false, have_iv = false, in_stream = false;
  int lineno = 0;

  auto fail = [&](const std::string& msg) {
    throw ParameterError("line " + std::to_string(lineno) + ": " + msg);
  };
  auto flush = [&] {
    if (!cur) return;
    if (!have_key || !have_iv || stream_hex.empty()) fail("vector block needs key, iv and stream");
    try {
      cur->stream = parse_hex_bytes(stream_hex);
    } catch (const ParameterError& e) {
      fail(std::string("stream: ") + e.what());
    }
    out.push_back(std::move(*cur));
    cur.reset();
    stream_hex.clear();
    have_key = have_iv = in_stream = false;
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string trimmed;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    }
    if (trimmed.empty()) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) flush();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (!in_stream) fail("expected 'field = value'");
      stream_hex += trimmed;
      continue;
    }
    std::string field;
    for (char c : line.substr(0, eq)) {
      if (!std::isspace(static_cast<unsigned char>(c))) field += static_cast<char>(std::tolower(c));
    }
    std::string value = line.substr(eq + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t\r") + 1);
    if (!cur) {
      cur.emplace();
      cur->line = lineno;
    }
    in_stream = false;
    try {
      if (field == "name") {
        cur->name = value;
      } else if (field == "key") {
        cur->key = key_from_estream_hex(value);
        have_key = true;
      } else if (field == "iv") {
        cur->iv = key_from_estream_hex(value);
        have_iv = true;
      } else if (field == "stream") {
        for (char c : value) {
          if (!std::isspace(static_cast<unsigned char>(c))) stream_hex += c;
        }
        in_stream = true;
      } else {
        fail("unknown field '" + field + "'");
      }
    } catch (const ParameterError& e) {
      if (std::string(e.what()).rfind("line ", 0) == 0) throw;
      fail(field + ": " + e.what());
    }
  }
  flush();
  return out;
}

inline std::vector<TestVector> read_test_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open vector file");
  return read_test_vectors(in);
}

// Index of the first keystream bit that differs from the vector, if any.
inline std::optional<std::size_t> first_divergent_bit(const TestVector& v) {
  const auto got = keystream_bytes(v.key, v.iv, v.stream.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    const std::uint8_t diff = got[i] ^ v.stream[i];
    if (diff) {
      for (unsigned k = 0; k < 8; ++k) {
        if ((diff >> k) & 1U) return 8 * i + k;
      }
    }
  }
  return std::nullopt;
}

}  // namespace eop::cipher
