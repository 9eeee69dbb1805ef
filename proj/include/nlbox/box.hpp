#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nlbox/common.hpp"

namespace nlbox {

using BoxId = std::size_t;

/// State of one non-local box. Inputs and outputs are unset until the
/// corresponding party uses the box; once set they never change.
struct NLBoxInstance {
  BoxId id = 0;
  std::optional<Bit> alice_input;
  std::optional<Bit> bob_input;
  std::optional<Bit> alice_output;
  std::optional<Bit> bob_output;
  std::optional<Party> first_mover;

  const std::optional<Bit>& input(Party p) const {
    return p == Party::Alice ? alice_input : bob_input;
  }
  const std::optional<Bit>& output(Party p) const {
    return p == Party::Alice ? alice_output : bob_output;
  }
};

/// A fixed pool of boxes shared by two parties.
///
/// Outputs are sampled lazily. The party that uses a box first receives a
/// uniform bit taken from a counter-based stream keyed by
/// (seed, box id, party); it is computed without looking at the remote
/// side, which may never use the box at all. When the second party uses
/// the box its output is fixed to `first ^ (x & y)`, so the correlation
/// holds exactly. Time is modelled by call order only; boxes never expire.
///
/// Single owner: may be moved between threads but not shared.
class BoxSession {
 public:
  BoxSession(std::uint64_t seed, std::size_t count);

  /// Enters `input` for `party` and returns that party's output
  /// immediately. Throws ProtocolViolation if the party already used the
  /// box, std::invalid_argument for an unknown id or a non-binary input.
  Bit enter_input(BoxId id, Party party, Bit input);

  bool is_used(BoxId id, Party party) const;

  const NLBoxInstance& box(BoxId id) const;

  std::size_t size() const noexcept { return boxes_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Hands out `count` consecutive boxes no protocol has claimed yet and
  /// returns the first id. Throws std::invalid_argument if fewer remain.
  BoxId allocate(std::size_t count);
  std::size_t unallocated() const noexcept {
    return boxes_.size() - next_free_;
  }

 private:
  const NLBoxInstance& checked(BoxId id) const;
  Bit fresh_output(BoxId id, Party party) const noexcept;

  std::uint64_t seed_;
  std::vector<NLBoxInstance> boxes_;
  std::size_t next_free_ = 0;
};

/// Convenience constructor; count must be at least 1.
BoxSession create_session(std::uint64_t seed, std::size_t count);

}  // namespace nlbox
