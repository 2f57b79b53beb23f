#include "schedkit/schedule_tree.hpp"

#include <algorithm>
#include <limits>

namespace schedkit::prec {

// ---------------------------------------------------------------------------
// IdleIntervals
// ---------------------------------------------------------------------------

IdleIntervals::IdleIntervals(long long horizon) {
  if (horizon < 1) throw argument_error("IdleIntervals: horizon must be >= 1");
  root_ = make(0, horizon);
}

int IdleIntervals::make(long long s, long long e) {
  pool_.push_back({s, e, e - s, rng_.next_u64(), -1, -1});
  return static_cast<int>(pool_.size()) - 1;
}

void IdleIntervals::pull(int v) {
  Node& n = pool_[v];
  n.max_len = n.end - n.start;
  if (n.left >= 0) n.max_len = std::max(n.max_len, pool_[n.left].max_len);
  if (n.right >= 0) n.max_len = std::max(n.max_len, pool_[n.right].max_len);
}

std::pair<int, int> IdleIntervals::split(int v, long long key) {
  if (v < 0) return {-1, -1};
  if (pool_[v].start < key) {
    auto [a, b] = split(pool_[v].right, key);
    pool_[v].right = a;
    pull(v);
    return {v, b};
  }
  auto [a, b] = split(pool_[v].left, key);
  pool_[v].left = b;
  pull(v);
  return {a, v};
}

int IdleIntervals::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (pool_[a].prio < pool_[b].prio) {
    pool_[a].right = merge(pool_[a].right, b);
    pull(a);
    return a;
  }
  pool_[b].left = merge(a, pool_[b].left);
  pull(b);
  return b;
}

// Leftmost interval with start > t and length >= p.
int IdleIntervals::first_fitting(int v, long long t, long long p) const {
  if (v < 0 || pool_[v].max_len < p) return -1;
  int in_left = first_fitting(pool_[v].left, t, p);
  if (in_left >= 0 && pool_[in_left].start > t) return in_left;
  const Node& n = pool_[v];
  if (n.start > t && n.end - n.start >= p) return v;
  return first_fitting(n.right, t, p);
}

long long IdleIntervals::find(long long t, long long p) const {
  if (p < 1) throw argument_error("IdleIntervals::find: p must be >= 1");
  // Interval containing t, if any: the rightmost start <= t.
  int v = root_, holder = -1;
  while (v >= 0) {
    if (pool_[v].start <= t) {
      holder = v;
      v = pool_[v].right;
    } else {
      v = pool_[v].left;
    }
  }
  if (holder >= 0 && pool_[holder].end > t && pool_[holder].end >= t + p)
    return t;
  int w = first_fitting(root_, t, p);
  if (w < 0) throw internal_error("IdleIntervals::find: no idle window left");
  return pool_[w].start;
}

void IdleIntervals::remove(long long t, long long t2) {
  if (t2 <= t) throw argument_error("IdleIntervals::remove: empty range");
  // Holder: the interval with the rightmost start <= t.
  long long start = -1, end = -1;
  bool found = false;
  for (int v = root_; v >= 0;) {
    if (pool_[v].start <= t) {
      start = pool_[v].start;
      end = pool_[v].end;
      found = true;
      v = pool_[v].right;
    } else {
      v = pool_[v].left;
    }
  }
  if (!found || !(start <= t && t2 <= end))
    throw internal_error("IdleIntervals::remove: range not idle");
  auto [a, bc] = split(root_, start);
  auto [b, c] = split(bc, start + 1);  // b = the holder alone
  if (b < 0 || pool_[b].start != start)
    throw internal_error("IdleIntervals::remove: holder lookup failed");
  int pieces = -1;
  if (start < t) {
    int left_piece = make(start, t);
    pieces = merge(pieces, left_piece);
  }
  if (t2 < end) {
    int right_piece = make(t2, end);
    pieces = merge(pieces, right_piece);
  }
  root_ = merge(merge(a, pieces), c);
}

std::vector<std::pair<long long, long long>> IdleIntervals::intervals() const {
  std::vector<std::pair<long long, long long>> out;
  auto walk = [&](auto&& self, int v) -> void {
    if (v < 0) return;
    self(self, pool_[v].left);
    out.push_back({pool_[v].start, pool_[v].end});
    self(self, pool_[v].right);
  };
  walk(walk, root_);
  return out;
}

void IdleIntervals::audit() const {
  auto walk = [&](auto&& self, int v) -> long long {
    if (v < 0) return 0;
    long long want = std::max(
        {pool_[v].end - pool_[v].start, self(self, pool_[v].left),
         self(self, pool_[v].right)});
    if (pool_[v].max_len != want)
      throw internal_error("IdleIntervals: cached maximum out of date");
    return want;
  };
  walk(walk, root_);
}

// ---------------------------------------------------------------------------
// CriticalCounters
// ---------------------------------------------------------------------------

CriticalCounters::CriticalCounters(int m) : m_(m) {
  if (m < 1) throw argument_error("CriticalCounters: m must be >= 1");
  root_ = make(0, 0);
}

int CriticalCounters::make(long long key, int value) {
  pool_.push_back({key, value, 0, value, rng_.next_u64(), -1, -1});
  return static_cast<int>(pool_.size()) - 1;
}

void CriticalCounters::push(int v) {
  Node& n = pool_[v];
  if (n.m_inc == 0) return;
  n.m_self += n.m_inc;
  n.m_max += n.m_inc;
  if (n.left >= 0) pool_[n.left].m_inc += n.m_inc;
  if (n.right >= 0) pool_[n.right].m_inc += n.m_inc;
  n.m_inc = 0;
}

void CriticalCounters::pull(int v) {
  Node& n = pool_[v];
  n.m_max = n.m_self;
  if (n.left >= 0)
    n.m_max = std::max(n.m_max, pool_[n.left].m_max + pool_[n.left].m_inc);
  if (n.right >= 0)
    n.m_max = std::max(n.m_max, pool_[n.right].m_max + pool_[n.right].m_inc);
}

std::pair<int, int> CriticalCounters::split(int v, long long key) {
  if (v < 0) return {-1, -1};
  push(v);
  if (pool_[v].key < key) {
    auto [a, b] = split(pool_[v].right, key);
    pool_[v].right = a;
    pull(v);
    return {v, b};
  }
  auto [a, b] = split(pool_[v].left, key);
  pool_[v].left = b;
  pull(v);
  return {a, v};
}

int CriticalCounters::merge(int a, int b) {
  if (a < 0) return b;
  if (b < 0) return a;
  if (pool_[a].prio < pool_[b].prio) {
    push(a);
    pool_[a].right = merge(pool_[a].right, b);
    pull(a);
    return a;
  }
  push(b);
  pool_[b].left = merge(a, pool_[b].left);
  pull(b);
  return b;
}

bool CriticalCounters::contains(long long t) const {
  int v = root_;
  int acc = 0;
  while (v >= 0) {
    acc += pool_[v].m_inc;
    if (pool_[v].key == t) return true;
    v = t < pool_[v].key ? pool_[v].left : pool_[v].right;
  }
  return false;
}

long long CriticalCounters::value(long long t) const {
  int v = root_;
  int acc = 0;
  while (v >= 0) {
    acc += pool_[v].m_inc;
    if (pool_[v].key == t) return acc + pool_[v].m_self;
    v = t < pool_[v].key ? pool_[v].left : pool_[v].right;
  }
  throw argument_error("CriticalCounters::value: not a critical point");
}

void CriticalCounters::insert(long long t) {
  if (contains(t)) return;
  // Value of the last critical point before t (0 is always present).
  int v = root_;
  int acc = 0;
  long long pred_val = -1;
  while (v >= 0) {
    acc += pool_[v].m_inc;
    if (pool_[v].key < t) {
      pred_val = acc + pool_[v].m_self;
      v = pool_[v].right;
    } else {
      v = pool_[v].left;
    }
  }
  if (pred_val < 0)
    throw internal_error("CriticalCounters::insert: no predecessor");
  auto [a, b] = split(root_, t);
  int node = make(t, static_cast<int>(pred_val));
  root_ = merge(merge(a, node), b);
}

void CriticalCounters::collect_saturated(int v, int acc,
                                         std::vector<long long>* out) const {
  if (v < 0) return;
  acc += pool_[v].m_inc;
  // True subtree maximum is m_max + accumulated pending increments.
  if (pool_[v].m_max + acc < m_) return;
  collect_saturated(pool_[v].left, acc, out);
  if (pool_[v].m_self + acc == m_) out->push_back(pool_[v].key);
  collect_saturated(pool_[v].right, acc, out);
}

std::vector<std::pair<long long, long long>> CriticalCounters::increase(
    long long from, long long to) {
  if (to <= from) return {};
  auto [a, bc] = split(root_, from);
  auto [b, c] = split(bc, to);
  std::vector<long long> saturated;
  if (b >= 0) {
    pool_[b].m_inc += 1;
    collect_saturated(b, 0, &saturated);
  }
  root_ = merge(merge(a, b), c);
  std::vector<std::pair<long long, long long>> out;
  out.reserve(saturated.size());
  for (long long t : saturated) {
    // Next critical point after t.
    int v = root_;
    long long succ = -1;
    while (v >= 0) {
      if (pool_[v].key > t) {
        succ = pool_[v].key;
        v = pool_[v].left;
      } else {
        v = pool_[v].right;
      }
    }
    if (succ < 0)
      throw internal_error("CriticalCounters: saturated point has no successor");
    out.push_back({t, succ});
  }
  return out;
}

int CriticalCounters::audit_walk(int v) const {
  if (v < 0) return std::numeric_limits<int>::min();
  int lm = audit_walk(pool_[v].left);
  int rm = audit_walk(pool_[v].right);
  int want = pool_[v].m_self;
  if (pool_[v].left >= 0)
    want = std::max(want, lm + pool_[pool_[v].left].m_inc);
  if (pool_[v].right >= 0)
    want = std::max(want, rm + pool_[pool_[v].right].m_inc);
  if (want != pool_[v].m_max)
    throw internal_error("CriticalCounters: m_max out of date");
  return want;
}

void CriticalCounters::audit() const { audit_walk(root_); }

}  // namespace schedkit::prec
