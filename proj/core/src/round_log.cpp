#include "yousense/round_log.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace yousense {

namespace {

constexpr std::array<char, 4> kMagic{'Y', 'S', 'R', 'L'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                         static_cast<char>(v)};
  out.write(bytes, 4);
}

void put_bits(std::ostream& out, const BitVector& bits) {
  const auto packed = bits.to_packed();
  out.write(reinterpret_cast<const char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
}

void read_exact(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) throw std::runtime_error("round log: truncated");
}

std::uint32_t get_u32(std::istream& in) {
  std::uint8_t b[4];
  read_exact(in, b, 4);
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

BitVector get_bits(std::istream& in) {
  std::vector<std::uint8_t> bytes(4);
  read_exact(in, bytes.data(), 4);
  const std::uint32_t n = (std::uint32_t{bytes[0]} << 24) | (std::uint32_t{bytes[1]} << 16) |
                          (std::uint32_t{bytes[2]} << 8) | bytes[3];
  bytes.resize(4 + (static_cast<std::size_t>(n) + 7) / 8);
  read_exact(in, bytes.data() + 4, bytes.size() - 4);
  return BitVector::from_packed(bytes);
}

}  // namespace

RoundLogWriter::RoundLogWriter(std::ostream& out, std::uint32_t users) : out_(out), users_(users) {
  out_.write(kMagic.data(), kMagic.size());
  out_.put(static_cast<char>(kVersion));
  put_u32(out_, users_);
}

void RoundLogWriter::write(const RoundResult& round) {
  if (round.messages.size() != users_ || round.fused.size() != users_) {
    throw std::invalid_argument("round log: user count mismatch");
  }
  put_u32(out_, static_cast<std::uint32_t>(round.round));
  put_bits(out_, round.truth);
  for (std::uint32_t s = 0; s < users_; ++s) {
    for (std::uint32_t r = 0; r < users_; ++r) {
      if (s == r) continue;
      const auto& msg = round.messages[s][r];
      if (!msg) throw std::invalid_argument("round log: missing message");
      put_u32(out_, msg->origin);
      put_bits(out_, msg->ciphertext.bits);
      put_bits(out_, msg->pad);
    }
  }
  for (const auto& f : round.fused) put_bits(out_, f);
}

RoundLogReader::RoundLogReader(std::istream& in) : in_(in) {
  std::array<char, 4> magic{};
  read_exact(in_, magic.data(), magic.size());
  if (magic != kMagic) throw std::runtime_error("round log: bad magic");
  std::uint8_t version = 0;
  read_exact(in_, &version, 1);
  if (version != kVersion) throw std::runtime_error("round log: unsupported version");
  users_ = get_u32(in_);
}

std::optional<LoggedRound> RoundLogReader::next() {
  if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
  LoggedRound round;
  round.round = get_u32(in_);
  round.truth = get_bits(in_);
  for (std::uint32_t s = 0; s < users_; ++s) {
    for (std::uint32_t r = 0; r < users_; ++r) {
      if (s == r) continue;
      LoggedMessage msg;
      msg.origin = get_u32(in_);
      msg.ciphertext = get_bits(in_);
      msg.pad = get_bits(in_);
      round.messages.push_back(std::move(msg));
    }
  }
  for (std::uint32_t u = 0; u < users_; ++u) round.fused.push_back(get_bits(in_));
  return round;
}

}  // namespace yousense
