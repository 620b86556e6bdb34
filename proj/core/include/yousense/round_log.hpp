#ifndef YOUSENSE_ROUND_LOG_HPP
#define YOUSENSE_ROUND_LOG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "yousense/simulator.hpp"

namespace yousense {

/// Binary round log.
///
/// Header: ASCII "YSRL", version byte (1), u32 user count. Each round:
/// u32 round index, packed truth, then for every ordered (sender, recipient)
/// pair with sender != recipient in row-major order a u32 origin, the packed
/// ciphertext and the packed pad, then one packed fused decision per user.
/// Integers are big-endian; "packed" is BitVector::to_packed.
class RoundLogWriter {
public:
  RoundLogWriter(std::ostream& out, std::uint32_t users);
  void write(const RoundResult& round);

private:
  std::ostream& out_;
  std::uint32_t users_;
};

struct LoggedMessage {
  std::uint32_t origin = 0;
  BitVector ciphertext;
  Pad pad;
};

struct LoggedRound {
  std::uint32_t round = 0;
  ChannelStates truth;
  std::vector<LoggedMessage> messages;  ///< row-major, diagonal skipped
  std::vector<BitVector> fused;
};

/// Throws std::runtime_error on a malformed log.
class RoundLogReader {
public:
  explicit RoundLogReader(std::istream& in);

  [[nodiscard]] std::uint32_t users() const noexcept { return users_; }
  /// Next round or nullopt at a clean end of stream.
  std::optional<LoggedRound> next();

private:
  std::istream& in_;
  std::uint32_t users_ = 0;
};

}  // namespace yousense

#endif  // YOUSENSE_ROUND_LOG_HPP
