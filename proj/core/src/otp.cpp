#include "yousense/otp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace yousense {

namespace {

constexpr std::uint64_t kMaxListedPads = std::uint64_t{1} << 20;

void flip_block(Pad& pad, const PadBlock& block) {
  for (std::size_t i = block.offset; i < block.offset + block.length; ++i) pad.flip(i);
}

bool block_equals(const Pad& a, const Pad& b, const PadBlock& block, bool complemented) {
  for (std::size_t i = block.offset; i < block.offset + block.length; ++i) {
    if ((a.get(i) != b.get(i)) != complemented) return false;
  }
  return true;
}

void validate_blocks(const std::vector<PadBlock>& blocks, std::size_t length) {
  std::size_t next = 0;
  for (const auto& b : blocks) {
    if (b.offset != next || b.length == 0) {
      throw std::invalid_argument("pad subset: blocks must be non-empty and tile the pad in order");
    }
    next += b.length;
  }
  if (next != length) throw std::invalid_argument("pad subset: blocks do not cover the pad");
}

std::size_t padded_length_for(std::size_t channels, std::size_t block_length) {
  return block_length * ((channels + block_length - 1) / block_length);
}

// Per-bit vote weights for log-likelihood recovery, expanded to the padded
// length (extension bits reuse the weight of the channel they repeat).
std::vector<double> expand_log_odds(std::span<const double> eta, std::size_t channels,
                                    std::size_t length) {
  if (eta.size() != channels && eta.size() != length) {
    throw std::invalid_argument("recover_pad: eta must have one entry per channel");
  }
  std::vector<double> weights(length);
  constexpr double kClamp = 1e-12;
  for (std::size_t i = 0; i < length; ++i) {
    const double e = std::clamp(eta.size() == length ? eta[i] : eta[i % channels], kClamp, 1.0 - kClamp);
    weights[i] = std::log(e / (1.0 - e));
  }
  return weights;
}

double log_binomial_pmf(std::size_t n, std::size_t k, double log_p, double log_q) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) - std::lgamma(nn - kk + 1.0) + kk * log_p +
         (nn - kk) * log_q;
}

// Homogeneous binomial tail P(X >= ceil(n/2)), X ~ Bin(n, eta), in log space.
double homogeneous_success(std::size_t n, double eta) {
  if (eta >= 1.0) return 1.0;
  if (eta <= 0.0) return 0.0;
  const double log_p = std::log(eta);
  const double log_q = std::log1p(-eta);
  double total = 0.0;
  for (std::size_t k = (n + 1) / 2; k <= n; ++k) total += std::exp(log_binomial_pmf(n, k, log_p, log_q));
  return std::min(total, 1.0);
}

}  // namespace

// --- PadSubset --------------------------------------------------------------

PadSubset PadSubset::from_pads(std::vector<Pad> pads) {
  if (pads.empty()) throw std::invalid_argument("pad subset: must contain at least one pad");
  const std::size_t length = pads.front().size();
  return from_pads(std::move(pads), length, {PadBlock{0, length}}, length);
}

PadSubset PadSubset::from_pads(std::vector<Pad> pads, std::size_t channels,
                               std::vector<PadBlock> blocks, std::size_t block_length) {
  if (pads.empty()) throw std::invalid_argument("pad subset: must contain at least one pad");
  const std::size_t length = pads.front().size();
  if (length == 0) throw std::invalid_argument("pad subset: pads must be non-empty");
  if (channels == 0 || channels > length) {
    throw std::invalid_argument("pad subset: channel count must be in [1, pad length]");
  }
  for (const auto& p : pads) {
    if (p.size() != length) throw std::invalid_argument("pad subset: pads must share one length");
  }
  validate_blocks(blocks, length);
  std::sort(pads.begin(), pads.end());
  if (std::adjacent_find(pads.begin(), pads.end()) != pads.end()) {
    throw std::invalid_argument("pad subset: pads must be distinct");
  }
  PadSubset s;
  s.channels_ = channels;
  s.length_ = length;
  s.block_length_ = block_length;
  s.blocks_ = std::move(blocks);
  s.pads_ = std::move(pads);
  return s;
}

PadSubset PadSubset::block_product(Pad base, std::size_t channels, std::vector<PadBlock> blocks,
                                   std::size_t block_length) {
  const std::size_t length = base.size();
  if (length == 0) throw std::invalid_argument("pad subset: pads must be non-empty");
  if (channels == 0 || channels > length) {
    throw std::invalid_argument("pad subset: channel count must be in [1, pad length]");
  }
  validate_blocks(blocks, length);
  if (blocks.size() > kMaxBlocks) {
    throw std::length_error("pad subset: at most " + std::to_string(kMaxBlocks) +
                            " blocks are supported");
  }
  // Canonical base: the lexicographically smallest member, i.e. every block
  // starting with a 0 bit.
  for (const auto& b : blocks) {
    if (base.get(b.offset)) flip_block(base, b);
  }
  PadSubset s;
  s.channels_ = channels;
  s.length_ = length;
  s.block_length_ = block_length;
  s.blocks_ = std::move(blocks);
  s.base_ = std::move(base);
  return s;
}

std::uint64_t PadSubset::size() const noexcept {
  if (base_) return std::uint64_t{1} << blocks_.size();
  return pads_.size();
}

Pad PadSubset::pad(std::uint64_t index) const {
  if (index >= size()) throw std::out_of_range("pad subset: index out of range");
  if (!base_) return pads_[index];
  // Members differ first at the leading bit of some block, so canonical
  // order is the binary order of the per-block leading bits (block 0 most
  // significant).
  Pad out = *base_;
  const std::size_t b = blocks_.size();
  for (std::size_t l = 0; l < b; ++l) {
    if ((index >> (b - 1 - l)) & 1U) flip_block(out, blocks_[l]);
  }
  return out;
}

std::vector<Pad> PadSubset::pads() const {
  if (size() > kMaxListedPads) throw std::length_error("pad subset: too many members to list");
  if (!base_) return pads_;
  std::vector<Pad> out;
  out.reserve(size());
  for (std::uint64_t j = 0; j < size(); ++j) out.push_back(pad(j));
  return out;
}

const Pad& PadSubset::base() const {
  if (!base_) throw std::logic_error("pad subset: not a block product");
  return *base_;
}

std::optional<std::uint64_t> PadSubset::index_of(const Pad& candidate) const {
  if (candidate.size() != length_) return std::nullopt;
  if (!base_) {
    auto it = std::lower_bound(pads_.begin(), pads_.end(), candidate);
    if (it == pads_.end() || *it != candidate) return std::nullopt;
    return static_cast<std::uint64_t>(it - pads_.begin());
  }
  std::uint64_t index = 0;
  for (const auto& block : blocks_) {
    const bool flipped = candidate.get(block.offset) != base_->get(block.offset);
    if (!block_equals(candidate, *base_, block, flipped)) return std::nullopt;
    index = (index << 1) | (flipped ? 1U : 0U);
  }
  return index;
}

bool PadSubset::complement_closed() const {
  if (base_) return true;
  return std::all_of(pads_.begin(), pads_.end(), [this](const Pad& p) { return contains(~p); });
}

std::string PadSubset::to_string() const {
  std::string out;
  const auto n = size();
  for (std::uint64_t j = 0; j < n; ++j) {
    if (j) out += ',';
    out += pad(j).to_string();
  }
  return out;
}

PadSubset parse_subset(std::string_view text) {
  std::vector<Pad> pads;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) pads.push_back(BitVector::from_string(token));
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return PadSubset::from_pads(std::move(pads));
}

std::vector<PadBlock> contiguous_blocks(std::size_t length, std::size_t block_length) {
  if (block_length == 0) throw std::invalid_argument("block length must be positive");
  std::vector<PadBlock> blocks;
  for (std::size_t offset = 0; offset < length; offset += block_length) {
    blocks.push_back({offset, std::min(block_length, length - offset)});
  }
  return blocks;
}

// --- generation -------------------------------------------------------------

Pad generate_pad(std::size_t length, Rng& rng) {
  Pad pad(length);
  for (std::size_t i = 0; i < length; ++i) pad.set(i, (rng() >> 63) != 0);
  return pad;
}

PadSubset subset_from_base(const Pad& base, std::size_t channels, std::size_t block_length) {
  if (channels < 1) throw std::invalid_argument("generate_subset: need at least one channel");
  if (block_length < 1 || block_length > channels) {
    throw std::invalid_argument("generate_subset: block length must be in [1, channels]");
  }
  const std::size_t length = padded_length_for(channels, block_length);
  if (base.size() != length) {
    throw std::invalid_argument("generate_subset: base pad must have " + std::to_string(length) +
                                " bits");
  }
  return PadSubset::block_product(base, channels, contiguous_blocks(length, block_length),
                                  block_length);
}

PadSubset generate_subset(std::size_t channels, std::size_t block_length, Rng& rng) {
  if (channels < 1) throw std::invalid_argument("generate_subset: need at least one channel");
  if (block_length < 1 || block_length > channels) {
    throw std::invalid_argument("generate_subset: block length must be in [1, channels]");
  }
  return subset_from_base(generate_pad(padded_length_for(channels, block_length), rng), channels,
                          block_length);
}

PadSubset generate_paired_subset(std::size_t channels, std::size_t pairs, Rng& rng) {
  if (channels < 1) throw std::invalid_argument("generate_paired_subset: need at least one channel");
  if (pairs < 1) throw std::invalid_argument("generate_paired_subset: need at least one pair");
  std::size_t num_blocks = 1;
  while ((std::uint64_t{1} << (num_blocks - 1)) < pairs) ++num_blocks;
  if (num_blocks > channels || num_blocks > PadSubset::kMaxBlocks) {
    throw std::invalid_argument("generate_paired_subset: " + std::to_string(pairs) +
                                " pairs need more blocks than channels");
  }
  // Near-equal contiguous blocks: the first (channels % b) get one extra bit.
  std::vector<PadBlock> blocks;
  const std::size_t small = channels / num_blocks;
  const std::size_t extra = channels % num_blocks;
  for (std::size_t l = 0, offset = 0; l < num_blocks; ++l) {
    const std::size_t len = small + (l < extra ? 1 : 0);
    blocks.push_back({offset, len});
    offset += len;
  }
  const std::size_t nominal = small + (extra ? 1 : 0);
  Pad base = generate_pad(channels, rng);
  if ((std::uint64_t{1} << (num_blocks - 1)) == pairs) {
    return PadSubset::block_product(std::move(base), channels, std::move(blocks), nominal);
  }
  std::vector<Pad> pads;
  pads.reserve(2 * pairs);
  for (std::uint64_t pattern = 0; pattern < pairs; ++pattern) {
    Pad p = base;
    for (std::size_t l = 0; l < num_blocks; ++l) {
      if ((pattern >> l) & 1U) flip_block(p, blocks[l]);
    }
    pads.push_back(~p);
    pads.push_back(std::move(p));
  }
  return PadSubset::from_pads(std::move(pads), channels, std::move(blocks), nominal);
}

// --- encryption -------------------------------------------------------------

SensingReport extend_report(const SensingReport& report, std::size_t padded_length) {
  if (report.empty()) throw std::invalid_argument("extend_report: empty report");
  if (padded_length < report.size()) throw std::invalid_argument("extend_report: target shorter than report");
  if (padded_length == report.size()) return report;
  SensingReport out(padded_length);
  for (std::size_t i = 0; i < padded_length; ++i) out.set(i, report.get(i % report.size()));
  return out;
}

namespace {

SensingReport fit_report(const SensingReport& report, const PadSubset& subset, const char* who) {
  if (report.size() == subset.padded_length()) return report;
  if (report.size() == subset.channels()) return extend_report(report, subset.padded_length());
  throw std::invalid_argument(std::string(who) + ": report length " + std::to_string(report.size()) +
                              " does not match subset (" + std::to_string(subset.channels()) +
                              " channels)");
}

}  // namespace

Encryption encrypt_report(const SensingReport& report, const PadSubset& subset, Rng& rng,
                          UserId sender) {
  if (subset.size() == 0) throw std::invalid_argument("encrypt_report: empty subset");
  const SensingReport plain = fit_report(report, subset, "encrypt_report");
  Pad pad = subset.pad(uniform_index(rng, subset.size()));
  return {Ciphertext{plain ^ pad, sender}, std::move(pad)};
}

SensingReport decrypt(const Ciphertext& ciphertext, const Pad& pad) {
  if (ciphertext.bits.size() != pad.size()) {
    throw std::invalid_argument("decrypt: ciphertext and pad lengths differ");
  }
  return ciphertext.bits ^ pad;
}

SensingReport decrypt_report(const Ciphertext& ciphertext, const Pad& pad, std::size_t channels) {
  return decrypt(ciphertext, pad).prefix(channels);
}

// --- recovery ---------------------------------------------------------------

Pad recover_pad(const SensingReport& own_report, const Ciphertext& ciphertext,
                const PadSubset& subset, Rng& rng, const RecoveryOptions& options) {
  if (subset.size() == 0) throw std::invalid_argument("recover_pad: empty subset");
  const std::size_t length = subset.padded_length();
  if (ciphertext.bits.size() != length) {
    throw std::invalid_argument("recover_pad: ciphertext length does not match subset");
  }
  const SensingReport own = fit_report(own_report, subset, "recover_pad");
  const BitVector target = own ^ ciphertext.bits;  // most likely pad
  const BitVector mask = options.mask ? *options.mask : BitVector(length, true);
  if (mask.size() != length) throw std::invalid_argument("recover_pad: mask length does not match subset");

  std::vector<double> log_odds;
  const bool weighted = options.weighting == VoteWeighting::log_likelihood;
  if (weighted) log_odds = expand_log_odds(options.eta, subset.channels(), length);

  if (subset.is_block_product()) {
    // Weights are additive over blocks and blocks are chosen independently,
    // so the maximizers form a product set: decide each block on its own.
    Pad out = subset.base();
    for (const auto& block : subset.blocks()) {
      double keep = 0.0;
      double flip = 0.0;
      for (std::size_t i = block.offset; i < block.offset + block.length; ++i) {
        if (!mask.get(i)) continue;
        const double w = weighted ? log_odds[i] : 1.0;
        (out.get(i) == target.get(i) ? keep : flip) += w;
      }
      const bool do_flip = flip > keep || (flip == keep && (rng() >> 63) != 0);
      if (do_flip) flip_block(out, block);
    }
    return out;
  }

  const auto members = subset.pads();
  std::vector<std::uint64_t> best;
  double best_weight = -std::numeric_limits<double>::infinity();
  for (std::uint64_t j = 0; j < members.size(); ++j) {
    double w = 0.0;
    if (weighted) {
      for (std::size_t i = 0; i < length; ++i) {
        if (mask.get(i) && members[j].get(i) == target.get(i)) w += log_odds[i];
      }
    } else {
      w = static_cast<double>(masked_agreement(members[j], target, mask));
    }
    if (w > best_weight) {
      best_weight = w;
      best.assign(1, j);
    } else if (w == best_weight) {
      best.push_back(j);
    }
  }
  const std::uint64_t pick = best.size() == 1 ? best.front() : best[uniform_index(rng, best.size())];
  return members[pick];
}

double pad_posterior(const SensingReport& own_report, const Ciphertext& ciphertext,
                     std::span<const double> eta, const Pad& candidate) {
  const std::size_t n = candidate.size();
  if (own_report.size() != n || ciphertext.bits.size() != n || eta.size() != n) {
    throw std::invalid_argument("pad_posterior: length mismatch");
  }
  double p = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool likely = own_report.get(i) != ciphertext.bits.get(i);
    p *= candidate.get(i) == likely ? eta[i] : 1.0 - eta[i];
  }
  return p;
}

double agreement_probability(const DetectorProfile& x, const DetectorProfile& y, double p1,
                             std::size_t channel) {
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw std::invalid_argument("agreement_probability: p1 must lie in [0,1]");
  const double fx = x.false_alarm.at(channel);
  const double fy = y.false_alarm.at(channel);
  const double mx = x.miss.at(channel);
  const double my = y.miss.at(channel);
  const double idle = (1.0 - fx) * (1.0 - fy) + fx * fy;
  const double busy = (1.0 - mx) * (1.0 - my) + mx * my;
  return (1.0 - p1) * idle + p1 * busy;
}

double predict_success_rate(std::span<const double> eta) {
  const std::size_t n = eta.size();
  if (n == 0) throw std::invalid_argument("predict_success_rate: need at least one bit");
  // dist[k] = P(exactly k agreements among the bits processed so far).
  std::vector<double> dist(n + 1, 0.0);
  dist[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = eta[i];
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("predict_success_rate: eta must lie in [0,1]");
    for (std::size_t k = i + 1; k > 0; --k) dist[k] = dist[k] * (1.0 - e) + dist[k - 1] * e;
    dist[0] *= 1.0 - e;
  }
  double tail = 0.0;
  for (std::size_t k = (n + 1) / 2; k <= n; ++k) tail += dist[k];
  return std::min(tail, 1.0);
}

double predict_success_rate(std::size_t block_length, double eta) {
  if (block_length == 0) throw std::invalid_argument("predict_success_rate: need at least one bit");
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("predict_success_rate: eta must lie in [0,1]");
  if (block_length <= 2048) {
    const std::vector<double> etas(block_length, eta);
    return predict_success_rate(etas);
  }
  return homogeneous_success(block_length, eta);
}

std::size_t invert_success_rate(double target, double eta) {
  if (!(target > 0.0 && target < 1.0)) {
    throw std::domain_error("invert_success_rate: target must lie in (0,1)");
  }
  if (!(eta > 0.5 && eta <= 1.0)) {
    throw std::domain_error("invert_success_rate: target unreachable unless eta > 0.5");
  }
  // Over odd n the success rate is increasing in n when eta > 0.5: bracket
  // by doubling, then bisect over odd values.
  constexpr std::size_t kLimit = (std::size_t{1} << 24) + 1;
  auto reaches = [&](std::size_t n) { return homogeneous_success(n, eta) >= target; };
  if (reaches(1)) return 1;
  std::size_t lo = 1;  // known to miss
  std::size_t hi = 3;
  while (!reaches(hi)) {
    lo = hi;
    hi = 2 * hi + 1;
    if (hi > kLimit) throw std::domain_error("invert_success_rate: target requires an impractical block length");
  }
  // Invariant: lo misses, hi reaches, both odd.
  while (hi - lo > 2) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (mid % 2 == 0) ++mid;
    if (mid >= hi) mid = hi - 2;
    if (reaches(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::size_t scale_block_length(std::size_t block_length, double omega, std::size_t channels) {
  if (!(omega >= 1.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be finite and >= 1");
  if (channels == 0) throw std::invalid_argument("scale_block_length: need at least one channel");
  const double scaled = std::ceil(omega * static_cast<double>(block_length) - 1e-9);
  const auto n = static_cast<std::size_t>(std::max(1.0, scaled));
  return std::min(n, channels);
}

}  // namespace yousense
