#include "nlbox/box.hpp"

#include <string>

namespace nlbox {

BoxSession::BoxSession(std::uint64_t seed, std::size_t count) : seed_(seed) {
  if (count == 0) {
    throw std::invalid_argument("BoxSession: box count must be positive");
  }
  boxes_.resize(count);
  for (std::size_t i = 0; i < count; ++i) boxes_[i].id = i;
}

BoxSession create_session(std::uint64_t seed, std::size_t count) {
  return BoxSession(seed, count);
}

const NLBoxInstance& BoxSession::checked(BoxId id) const {
  if (id >= boxes_.size()) {
    throw std::invalid_argument("unknown box id " + std::to_string(id));
  }
  return boxes_[id];
}

const NLBoxInstance& BoxSession::box(BoxId id) const { return checked(id); }

bool BoxSession::is_used(BoxId id, Party party) const {
  return checked(id).input(party).has_value();
}

Bit BoxSession::fresh_output(BoxId id, Party party) const noexcept {
  const std::uint64_t stream = (static_cast<std::uint64_t>(id) << 1) |
                               static_cast<std::uint64_t>(party);
  return static_cast<Bit>(derive_seed(seed_, stream) >> 63);
}

Bit BoxSession::enter_input(BoxId id, Party party, Bit input) {
  checked(id);
  if (input > 1) throw std::invalid_argument("box input must be 0 or 1");
  NLBoxInstance& b = boxes_[id];
  auto& in = party == Party::Alice ? b.alice_input : b.bob_input;
  auto& out = party == Party::Alice ? b.alice_output : b.bob_output;
  if (in) {
    throw ProtocolViolation(std::string(to_string(party)) +
                            " already used box " + std::to_string(id));
  }
  in = input;
  if (!b.first_mover) {
    b.first_mover = party;
    out = fresh_output(id, party);
  } else {
    const Bit remote_out = *b.output(other(party));
    out = static_cast<Bit>(remote_out ^ (*b.alice_input & *b.bob_input));
  }
  return *out;
}

BoxId BoxSession::allocate(std::size_t count) {
  if (count > unallocated()) {
    throw std::invalid_argument("BoxSession: " + std::to_string(count) +
                                " boxes requested, " +
                                std::to_string(unallocated()) + " available");
  }
  const BoxId first = next_free_;
  next_free_ += count;
  return first;
}

}  // namespace nlbox
