#pragma once

#include <utility>
#include <vector>

#include "schedkit/common.hpp"

namespace schedkit::prec {

// Set of maximal idle intervals (t, t'] over unit-time slots, stored in a
// treap keyed by interval start. Each node caches the maximum interval
// length in its subtree, so the earliest idle window of a given length can
// be found in O(log n).
class IdleIntervals {
 public:
  explicit IdleIntervals(long long horizon);  // all of (0, horizon] idle

  // Smallest t' >= t such that (t', t'+p] is entirely idle.
  long long find(long long t, long long p) const;
  // Mark the idle stretch (t, t2] busy. It must lie inside one interval.
  void remove(long long t, long long t2);

  std::vector<std::pair<long long, long long>> intervals() const;  // sorted
  void audit() const;  // cached-maxima consistency (tests)

 private:
  struct Node {
    long long start, end;
    long long max_len;
    std::uint64_t prio;
    int left = -1, right = -1;
  };
  int root_ = -1;
  std::vector<Node> pool_;
  mutable Rng rng_{0x9d1e5b2c3a774f01ULL};

  int make(long long s, long long e);
  void pull(int v);
  std::pair<int, int> split(int v, long long key);  // starts < key | >= key
  int merge(int a, int b);
  int first_fitting(int v, long long t, long long p) const;
};

// Critical time points t with counters m_t in [0, m]: m_t is the number of
// scheduled intervals covering (t, t+1]. Counters are piecewise constant
// between consecutive critical points. Treap with subtree-add (m_inc),
// node value (m_self) and subtree max (m_max).
class CriticalCounters {
 public:
  explicit CriticalCounters(int m);  // starts with T = {0}, m_0 = 0

  // Add t with the counter value of the last critical point before it.
  void insert(long long t);
  // +1 on every critical point in [from, to); all must be < m beforehand.
  // Returns the points that reached m, each with its next critical point.
  std::vector<std::pair<long long, long long>> increase(long long from,
                                                        long long to);

  long long value(long long t) const;  // t must be critical
  bool contains(long long t) const;
  void audit() const;  // m_max consistency (tests)

 private:
  struct Node {
    long long key;
    int m_self;         // value modulo pending m_inc of ancestors and self
    int m_inc = 0;      // pending addition for the whole subtree (incl. self)
    int m_max;          // subtree max, modulo own m_inc
    std::uint64_t prio;
    int left = -1, right = -1;
  };
  int m_;
  int root_ = -1;
  std::vector<Node> pool_;
  mutable Rng rng_{0x51cf32a7d09b6e43ULL};

  int make(long long key, int value);
  void push(int v);
  void pull(int v);
  std::pair<int, int> split(int v, long long key);
  int merge(int a, int b);
  void collect_saturated(int v, int acc, std::vector<long long>* out) const;
  int audit_walk(int v) const;
};

}  // namespace schedkit::prec
