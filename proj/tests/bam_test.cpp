#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <variant>
#include <vector>

#include "iotsdn/bam.hpp"

using namespace iotsdn;

namespace {

PerClass<Fraction> fifty_thirty_twenty() {
  return {Fraction::from_double(0.5), Fraction::from_double(0.3),
          Fraction::from_double(0.2)};
}

LinkLedger hundred() {
  return LinkLedger("l", 100, fifty_thirty_twenty());
}

bool admitted(const AdmitResult& r) {
  return std::holds_alternative<Reservation>(r);
}

}  // namespace

TEST_CASE("configure computes per-class limits") {
  LinkLedger ledger("core", 100'000'000, fifty_thirty_twenty());
  CHECK(ledger.limit(TrafficClass::Tc0) == 50'000'000);
  CHECK(ledger.limit(TrafficClass::Tc1) == 30'000'000);
  CHECK(ledger.limit(TrafficClass::Tc2) == 20'000'000);
  CHECK(ledger.total_reserved() == 0);
  for (TrafficClass tc : kTrafficClasses) {
    CHECK(ledger.allocated(tc) == 0);
    CHECK(ledger.borrowed(tc) == 0);
    CHECK(ledger.headroom(tc) == ledger.limit(tc));
  }
}

TEST_CASE("configure rejects bad constraints") {
  PerClass<Fraction> over = {Fraction::from_double(0.6),
                             Fraction::from_double(0.3),
                             Fraction::from_double(0.2)};
  CHECK_THROWS_AS(LinkLedger("l", 100, over), InvalidConstraints);
  PerClass<Fraction> zero = {Fraction::from_double(1.0), Fraction{0},
                             Fraction{0}};
  CHECK_THROWS_AS(LinkLedger("l", 100, zero), InvalidConstraints);
  CHECK_THROWS_AS(LinkLedger("l", 0, fifty_thirty_twenty()),
                  InvalidConstraints);
}

TEST_CASE("admit within and beyond class headroom") {
  LinkLedger ledger = hundred();
  AdmitResult first = ledger.admit("a", TrafficClass::Tc0, 30);
  REQUIRE(admitted(first));
  CHECK(std::get<Reservation>(first).kind() == ReservationKind::Native);
  CHECK(ledger.allocated(TrafficClass::Tc0) == 30);

  AdmitResult second = ledger.admit("b", TrafficClass::Tc0, 30);
  REQUIRE(!admitted(second));
  CHECK(std::get<Rejected>(second).headroom == 20);
  CHECK(ledger.allocated(TrafficClass::Tc0) == 30);  // rejected leaves state

  CHECK(admitted(ledger.admit("c", TrafficClass::Tc1, 30)));
  CHECK(ledger.allocated(TrafficClass::Tc1) == 30);
  CHECK(ledger.total_reserved() == 60);
}

TEST_CASE("admit validates its arguments") {
  LinkLedger ledger = hundred();
  CHECK_THROWS_AS(ledger.admit("", TrafficClass::Tc0, 10), ValidationError);
  CHECK_THROWS_AS(ledger.admit("a", TrafficClass::Tc0, 0), ValidationError);
  CHECK(admitted(ledger.admit("a", TrafficClass::Tc0, 10)));
  CHECK_THROWS_AS(ledger.admit("a", TrafficClass::Tc1, 5),
                  DuplicateReservation);
}

TEST_CASE("release subtracts from the occupied column") {
  LinkLedger ledger = hundred();
  CHECK(admitted(ledger.admit("a", TrafficClass::Tc0, 30)));
  ledger.release("a");
  CHECK(ledger.allocated(TrafficClass::Tc0) == 0);
  CHECK_THROWS_AS(ledger.release("a"), UnknownReservation);

  // Borrowed slice: native Tc0, parked in Tc1.
  CHECK(admitted(ledger.admit("b", TrafficClass::Tc1, 10, TrafficClass::Tc0)));
  CHECK(ledger.borrowed(TrafficClass::Tc1) == 10);
  ledger.release("b");
  CHECK(ledger.borrowed(TrafficClass::Tc1) == 0);
}

TEST_CASE("headroom arithmetic") {
  LinkLedger ledger = hundred();
  CHECK(admitted(ledger.admit("a", TrafficClass::Tc0, 30)));
  CHECK(ledger.headroom(TrafficClass::Tc0) == 20);
  CHECK(ledger.headroom(TrafficClass::Tc1) == 30);
  CHECK(admitted(ledger.admit("b", TrafficClass::Tc0, 20)));
  CHECK(ledger.headroom(TrafficClass::Tc0) == 0);
  CHECK(admitted(ledger.admit("c", TrafficClass::Tc1, 10, TrafficClass::Tc0)));
  CHECK(ledger.headroom(TrafficClass::Tc1) == 20);
}

TEST_CASE("reassign moves rate between columns") {
  LinkLedger ledger = hundred();
  CHECK(admitted(ledger.admit("iot", TrafficClass::Tc0, 10)));
  ledger.reassign("iot", TrafficClass::Tc1);
  CHECK(ledger.allocated(TrafficClass::Tc0) == 0);
  CHECK(ledger.borrowed(TrafficClass::Tc1) == 10);
  CHECK(ledger.reservation("iot").kind() == ReservationKind::Borrowed);
  CHECK(ledger.total_reserved() == 10);

  ledger.reassign("iot", TrafficClass::Tc0);
  CHECK(ledger.reservation("iot").kind() == ReservationKind::Native);
  CHECK(ledger.allocated(TrafficClass::Tc0) == 10);
  CHECK(ledger.borrowed(TrafficClass::Tc1) == 0);
}

TEST_CASE("reassign needs headroom in the target class") {
  LinkLedger ledger = hundred();
  CHECK(admitted(ledger.admit("big", TrafficClass::Tc0, 40)));
  CHECK_THROWS_AS(ledger.reassign("big", TrafficClass::Tc2),
                  InsufficientHeadroom);
  CHECK(ledger.allocated(TrafficClass::Tc0) == 40);
  CHECK_THROWS_AS(ledger.reassign("nope", TrafficClass::Tc1),
                  UnknownReservation);
  ledger.reassign("big", TrafficClass::Tc0);  // no-op move to same class
  CHECK(ledger.allocated(TrafficClass::Tc0) == 40);
}

TEST_CASE("randomized ledger invariants and inversion") {
  std::mt19937 rng(29);
  for (int round = 0; round < 100; ++round) {
    BitsPerSecond capacity = 100 + rng() % 900;
    LinkLedger ledger("l", capacity, fifty_thirty_twenty());
    std::vector<std::string> live;
    int next_id = 0;
    for (int op = 0; op < 40; ++op) {
      int kind = rng() % 3;
      if (kind == 0 || live.empty()) {
        TrafficClass cls = tc_from_index(rng() % 3);
        TrafficClass native = tc_from_index(rng() % 3);
        BitsPerSecond rate = 1 + rng() % (capacity / 2);
        std::string id = "r" + std::to_string(next_id++);
        if (admitted(ledger.admit(id, cls, rate, native))) {
          live.push_back(id);
        }
      } else if (kind == 1) {
        std::size_t pick = rng() % live.size();
        ledger.release(live[pick]);
        live.erase(live.begin() + pick);
      } else {
        std::size_t pick = rng() % live.size();
        try {
          ledger.reassign(live[pick], tc_from_index(rng() % 3));
        } catch (const InsufficientHeadroom&) {
        }
      }
      BitsPerSecond total = 0;
      for (TrafficClass tc : kTrafficClasses) {
        BitsPerSecond used = ledger.allocated(tc) + ledger.borrowed(tc);
        CHECK(used >= 0);
        CHECK(used <= ledger.limit(tc));
        CHECK(ledger.headroom(tc) == ledger.limit(tc) - used);
        total += used;
      }
      CHECK(total <= capacity);
      CHECK(total == ledger.total_reserved());
    }
    for (const std::string& id : live) {
      ledger.release(id);
    }
    for (TrafficClass tc : kTrafficClasses) {
      CHECK(ledger.allocated(tc) == 0);
      CHECK(ledger.borrowed(tc) == 0);
    }
    CHECK(ledger.reservations().empty());
  }
}
