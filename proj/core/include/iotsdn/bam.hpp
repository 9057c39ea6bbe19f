#pragma once

#include <map>
#include <string>
#include <variant>

#include "iotsdn/errors.hpp"
#include "iotsdn/topology.hpp"
#include "iotsdn/types.hpp"

namespace iotsdn {

enum class ReservationKind { Native, Borrowed };

// One booked slice of a link's bandwidth. `cls` is the class whose budget
// the slice currently occupies; when it differs from `native` the slice is
// borrowed capacity lent by `cls`.
struct Reservation {
  std::string id;
  LinkId link;
  TrafficClass cls = TrafficClass::Tc0;
  TrafficClass native = TrafficClass::Tc0;
  BitsPerSecond rate = 0;

  ReservationKind kind() const {
    return cls == native ? ReservationKind::Native : ReservationKind::Borrowed;
  }

  friend bool operator==(const Reservation&, const Reservation&) = default;
};

struct Rejected {
  BitsPerSecond headroom = 0;
};

using AdmitResult = std::variant<Reservation, Rejected>;

// Per-link bandwidth ledger with a hard cap per traffic class (maximum
// allocation semantics: classes never share natively). Native bookings count
// against their own class; a booking placed in a foreign class counts
// against the lender's cap as borrowed rate.
class LinkLedger {
 public:
  LinkLedger(LinkId link, BitsPerSecond capacity,
             const PerClass<Fraction>& constraints);

  const LinkId& link() const { return link_; }
  BitsPerSecond capacity() const { return capacity_; }
  Fraction constraint(TrafficClass cls) const {
    return constraints_[tc_index(cls)];
  }

  // Hard cap for a class: constraint fraction of capacity, in bits/s.
  BitsPerSecond limit(TrafficClass cls) const {
    return constraints_[tc_index(cls)].of(capacity_);
  }

  BitsPerSecond allocated(TrafficClass cls) const {
    return allocated_[tc_index(cls)];
  }
  BitsPerSecond borrowed(TrafficClass cls) const {
    return borrowed_[tc_index(cls)];
  }
  BitsPerSecond headroom(TrafficClass cls) const;
  BitsPerSecond total_reserved() const;

  // Books `rate` in class `cls` for a flow native to `native`. All or
  // nothing: on insufficient class headroom returns Rejected with the
  // headroom and leaves the ledger untouched.
  AdmitResult admit(const std::string& id, TrafficClass cls,
                    BitsPerSecond rate, TrafficClass native);
  AdmitResult admit(const std::string& id, TrafficClass cls,
                    BitsPerSecond rate) {
    return admit(id, cls, rate, cls);
  }

  void release(const std::string& id);

  // Moves an existing reservation into `to`. The slice becomes borrowed
  // unless `to` is the flow's native class.
  void reassign(const std::string& id, TrafficClass to);

  bool has_reservation(const std::string& id) const {
    return reservations_.count(id) != 0;
  }
  const Reservation& reservation(const std::string& id) const;

  // Sorted by id; deterministic iteration for rebalancing and metrics.
  const std::map<std::string, Reservation>& reservations() const {
    return reservations_;
  }

 private:
  LinkId link_;
  BitsPerSecond capacity_ = 0;
  PerClass<Fraction> constraints_{};
  PerClass<BitsPerSecond> allocated_{};
  PerClass<BitsPerSecond> borrowed_{};
  std::map<std::string, Reservation> reservations_;

  BitsPerSecond& column(const Reservation& r);
};

}  // namespace iotsdn
