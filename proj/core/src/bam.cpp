#include "iotsdn/bam.hpp"

#include <algorithm>
#include <utility>

namespace iotsdn {

LinkLedger::LinkLedger(LinkId link, BitsPerSecond capacity,
                       const PerClass<Fraction>& constraints)
    : link_(std::move(link)), capacity_(capacity), constraints_(constraints) {
  if (capacity_ <= 0) {
    throw InvalidConstraints("link " + link_ + ": capacity must be positive");
  }
  std::int64_t sum = 0;
  for (TrafficClass tc : kTrafficClasses) {
    std::int64_t ppm = constraints_[tc_index(tc)].ppm;
    if (ppm <= 0) {
      throw InvalidConstraints("link " + link_ + ": constraint for " +
                               to_string(tc) + " must be positive");
    }
    sum += ppm;
  }
  if (sum > 1'000'000) {
    throw InvalidConstraints("link " + link_ +
                             ": constraint fractions sum above 1.0");
  }
}

BitsPerSecond LinkLedger::headroom(TrafficClass cls) const {
  BitsPerSecond room =
      limit(cls) - allocated_[tc_index(cls)] - borrowed_[tc_index(cls)];
  return std::max<BitsPerSecond>(room, 0);
}

BitsPerSecond LinkLedger::total_reserved() const {
  BitsPerSecond total = 0;
  for (TrafficClass tc : kTrafficClasses) {
    total += allocated_[tc_index(tc)] + borrowed_[tc_index(tc)];
  }
  return total;
}

BitsPerSecond& LinkLedger::column(const Reservation& r) {
  return r.kind() == ReservationKind::Native ? allocated_[tc_index(r.cls)]
                                             : borrowed_[tc_index(r.cls)];
}

AdmitResult LinkLedger::admit(const std::string& id, TrafficClass cls,
                              BitsPerSecond rate, TrafficClass native) {
  if (id.empty()) {
    throw ValidationError("reservation id must be nonempty");
  }
  if (rate <= 0) {
    throw ValidationError("reservation rate must be positive");
  }
  if (reservations_.count(id) != 0) {
    throw DuplicateReservation("reservation " + id + " already booked on " +
                               link_);
  }
  if (headroom(cls) < rate) {
    return Rejected{headroom(cls)};
  }
  Reservation r{id, link_, cls, native, rate};
  column(r) += rate;
  reservations_.emplace(id, std::move(r));
  return reservations_.at(id);
}

void LinkLedger::release(const std::string& id) {
  auto it = reservations_.find(id);
  if (it == reservations_.end()) {
    throw UnknownReservation("no reservation " + id + " on " + link_);
  }
  column(it->second) -= it->second.rate;
  reservations_.erase(it);
}

void LinkLedger::reassign(const std::string& id, TrafficClass to) {
  auto it = reservations_.find(id);
  if (it == reservations_.end()) {
    throw UnknownReservation("no reservation " + id + " on " + link_);
  }
  Reservation& r = it->second;
  if (r.cls == to) {
    return;
  }
  if (headroom(to) < r.rate) {
    throw InsufficientHeadroom("link " + link_ + ": " + to_string(to) +
                               " headroom below " + std::to_string(r.rate));
  }
  column(r) -= r.rate;
  r.cls = to;
  column(r) += r.rate;
}

const Reservation& LinkLedger::reservation(const std::string& id) const {
  auto it = reservations_.find(id);
  if (it == reservations_.end()) {
    throw UnknownReservation("no reservation " + id + " on " + link_);
  }
  return it->second;
}

}  // namespace iotsdn
