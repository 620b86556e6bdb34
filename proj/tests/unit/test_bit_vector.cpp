#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "yousense/bit_vector.hpp"

using yousense::BitVector;

TEST_SUITE("bit_vector") {

TEST_CASE("string form round-trips and keeps bit 0 first") {
  const auto v = BitVector::from_string("1001");
  CHECK(v.size() == 4);
  CHECK(v[0]);
  CHECK_FALSE(v[1]);
  CHECK(v[3]);
  CHECK(v.to_string() == "1001");
  CHECK(BitVector::from_string("").empty());
  CHECK_THROWS_AS((void)BitVector::from_string("10x1"), std::invalid_argument);
}

TEST_CASE("packed form is a big-endian length then MSB-first bytes") {
  const auto v = BitVector::from_string("1001");
  const std::vector<std::uint8_t> expected{0, 0, 0, 4, 0x90};
  CHECK(v.to_packed() == expected);

  const auto w = BitVector::from_string("111100001");
  const std::vector<std::uint8_t> expected_w{0, 0, 0, 9, 0xF0, 0x80};
  CHECK(w.to_packed() == expected_w);
  CHECK(BitVector::from_packed(expected_w) == w);

  const std::vector<std::uint8_t> dirty{0, 0, 0, 4, 0x91};
  CHECK_THROWS((void)BitVector::from_packed(dirty));
  const std::vector<std::uint8_t> short_payload{0, 0, 0, 9, 0xF0};
  CHECK_THROWS((void)BitVector::from_packed(short_payload));
}

TEST_CASE("packed vectors concatenate in a stream") {
  auto bytes = BitVector::from_string("101").to_packed();
  const auto more = BitVector::from_string("0110011001100110011001100110011001100110011001100110011001100110011").to_packed();
  bytes.insert(bytes.end(), more.begin(), more.end());
  std::size_t used = 0;
  const auto a = BitVector::from_packed(bytes, used);
  CHECK(a.to_string() == "101");
  const auto b = BitVector::from_packed(std::span(bytes).subspan(used));
  CHECK(b.size() == 67);
}

TEST_CASE("word-crossing operations") {
  BitVector a(130);
  a.set(0, true);
  a.set(64, true);
  a.set(129, true);
  CHECK(a.count() == 3);
  CHECK((~a).count() == 127);
  const auto s = a.slice(60, 10);
  CHECK(s.to_string() == "0000100000");
  CHECK(concat(a.prefix(1), s).to_string() == "10000100000");
  BitVector b(130, true);
  CHECK(hamming_distance(a, b) == 127);
  CHECK((a ^ b) == ~a);
  CHECK((a & b) == a);
  CHECK_THROWS_AS(a ^= BitVector(5), std::invalid_argument);
  CHECK_THROWS_AS((void)a.get(130), std::out_of_range);
}

TEST_CASE("ordering is lexicographic on the bit string") {
  CHECK(BitVector::from_string("0011") < BitVector::from_string("0101"));
  CHECK(BitVector::from_string("01") < BitVector::from_string("010"));
  CHECK(BitVector::from_string("1") > BitVector::from_string("0111"));
  BitVector x(70), y(70);
  y.set(69, true);
  CHECK(x < y);
}

TEST_CASE("masked agreement") {
  const auto a = BitVector::from_string("1100");
  const auto b = BitVector::from_string("1010");
  CHECK(masked_agreement(a, b, BitVector(4, true)) == 2);
  CHECK(masked_agreement(a, b, BitVector::from_string("1100")) == 1);
}

}
