#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "schedkit/schedule_tree.hpp"

using namespace schedkit;
using namespace schedkit::prec;

namespace {

// Reference: flat array of busy flags per unit slot.
struct SlotArray {
  std::vector<char> busy;
  explicit SlotArray(long long horizon) : busy(horizon, 0) {}

  long long find(long long t, long long p) const {
    for (long long s = t;; ++s) {
      bool ok = true;
      for (long long u = s; u < s + p; ++u) {
        if (u >= static_cast<long long>(busy.size())) return -1;
        if (busy[u]) {
          ok = false;
          break;
        }
      }
      if (ok) return s;
    }
  }
  void remove(long long t, long long t2) {
    for (long long u = t; u < t2; ++u) busy[u] = 1;
  }
};

// Reference: explicit map from critical points to counters.
struct CounterArray {
  int m;
  std::vector<std::pair<long long, long long>> pts;  // (t, m_t), sorted

  explicit CounterArray(int m_in) : m(m_in), pts{{0, 0}} {}

  bool contains(long long t) const {
    for (auto& [k, v] : pts)
      if (k == t) return true;
    return false;
  }
  long long value(long long t) const {
    for (auto& [k, v] : pts)
      if (k == t) return v;
    return -1;
  }
  void insert(long long t) {
    if (contains(t)) return;
    long long pv = 0;
    for (auto& [k, v] : pts)
      if (k < t) pv = v;
    pts.push_back({t, pv});
    std::sort(pts.begin(), pts.end());
  }
  bool all_below(long long from, long long to) const {
    for (auto& [k, v] : pts)
      if (k >= from && k < to && v >= m) return false;
    return true;
  }
  std::vector<std::pair<long long, long long>> increase(long long from,
                                                        long long to) {
    std::vector<std::pair<long long, long long>> out;
    for (size_t i = 0; i < pts.size(); ++i) {
      auto& [k, v] = pts[i];
      if (k >= from && k < to) {
        ++v;
        if (v == m) out.push_back({k, i + 1 < pts.size() ? pts[i + 1].first : -1});
      }
    }
    return out;
  }
};

}  // namespace

TEST_CASE("IdleIntervals basics") {
  IdleIntervals ds(20);
  CHECK(ds.find(0, 5) == 0);
  ds.remove(3, 7);
  CHECK(ds.find(0, 3) == 0);
  CHECK(ds.find(0, 4) == 7);
  CHECK(ds.find(4, 1) == 7);
  ds.remove(0, 3);
  CHECK(ds.find(0, 1) == 7);
  CHECK(ds.intervals() == std::vector<std::pair<long long, long long>>{{7, 20}});
  ds.audit();
  CHECK_THROWS_AS(ds.find(0, 14), internal_error);
}

TEST_CASE("CriticalCounters basics") {
  CriticalCounters cc(2);
  cc.insert(4);
  cc.insert(9);
  CHECK(cc.value(0) == 0);
  CHECK(cc.value(4) == 0);
  auto r1 = cc.increase(0, 9);
  CHECK(r1.empty());
  CHECK(cc.value(0) == 1);
  CHECK(cc.value(4) == 1);
  CHECK(cc.value(9) == 0);
  auto r2 = cc.increase(2, 6);
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == std::pair<long long, long long>{4, 9});
  cc.audit();
}

TEST_CASE("differential: IdleIntervals vs slot array") {
  Rng rng(4242);
  for (int seq = 0; seq < 300; ++seq) {
    long long horizon = 30 + rng.next_int(0, 50);
    IdleIntervals ds(horizon);
    SlotArray ref(horizon);
    for (int op = 0; op < 40; ++op) {
      long long t = rng.next_int(0, horizon - 2);
      long long p = rng.next_int(1, 5);
      long long want = ref.find(t, p);
      if (want < 0) break;  // reference ran out of room
      long long got = ds.find(t, p);
      REQUIRE(got == want);
      if (rng.next_double() < 0.7) {
        ds.remove(got, got + p);
        ref.remove(got, got + p);
      }
      ds.audit();
    }
  }
}

TEST_CASE("differential: CriticalCounters vs counter array") {
  Rng rng(777);
  for (int seq = 0; seq < 300; ++seq) {
    int m = 1 + static_cast<int>(rng.next_int(0, 3));
    CriticalCounters cc(m);
    CounterArray ref(m);
    cc.insert(1000);  // sentinel so every saturated point has a successor
    ref.insert(1000);
    for (int op = 0; op < 60; ++op) {
      if (rng.next_double() < 0.45) {
        long long t = rng.next_int(1, 40);
        cc.insert(t);
        ref.insert(t);
      } else {
        long long from = rng.next_int(0, 39);
        long long to = from + rng.next_int(1, 8);
        if (!ref.all_below(from, to)) continue;  // precondition
        auto got = cc.increase(from, to);
        auto want = ref.increase(from, to);
        REQUIRE(got == want);
      }
      for (auto& [k, v] : ref.pts) {
        REQUIRE(cc.contains(k));
        REQUIRE(cc.value(k) == v);
      }
      cc.audit();
    }
  }
}
