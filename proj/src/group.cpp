#include "warpcone/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace warpcone {

namespace {

long long mod_pos(long long a, long long m) {
  long long r = a % m;
  return r < 0 ? r + m : r;
}

long long ck_add(long long a, long long b) {
  long long out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("group element overflow (add)");
  return out;
}

long long ck_mul(long long a, long long b) {
  long long out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("group element overflow (mul)");
  return out;
}

QuatEl quat_reduce(QuatEl q) {
  while (q.k >= 2 && q.q[0] % 5 == 0 && q.q[1] % 5 == 0 && q.q[2] % 5 == 0 && q.q[3] % 5 == 0) {
    for (auto& c : q.q) c /= 5;
    q.k -= 2;
  }
  return q;
}

QuatEl quat_mul(const QuatEl& a, const QuatEl& b) {
  const auto& p = a.q;
  const auto& q = b.q;
  QuatEl r;
  r.q[0] = ck_add(ck_add(ck_mul(p[0], q[0]), -ck_mul(p[1], q[1])),
                  ck_add(-ck_mul(p[2], q[2]), -ck_mul(p[3], q[3])));
  r.q[1] = ck_add(ck_add(ck_mul(p[0], q[1]), ck_mul(p[1], q[0])),
                  ck_add(ck_mul(p[2], q[3]), -ck_mul(p[3], q[2])));
  r.q[2] = ck_add(ck_add(ck_mul(p[0], q[2]), -ck_mul(p[1], q[3])),
                  ck_add(ck_mul(p[2], q[0]), ck_mul(p[3], q[1])));
  r.q[3] = ck_add(ck_add(ck_mul(p[0], q[3]), ck_mul(p[1], q[2])),
                  ck_add(-ck_mul(p[2], q[1]), ck_mul(p[3], q[0])));
  r.k = a.k + b.k;
  return quat_reduce(r);
}

std::vector<int> word_concat_reduce(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  for (int letter : b) {
    if (!out.empty() && out.back() == -letter) {
      out.pop_back();
    } else {
      out.push_back(letter);
    }
  }
  return out;
}

}  // namespace

Element Element::mul(const Element& rhs) const {
  if (data.index() != rhs.data.index()) throw std::logic_error("element type mismatch");
  Element out;
  if (auto* a = std::get_if<IntEl>(&data)) {
    out.data = IntEl{ck_add(a->n, std::get<IntEl>(rhs.data).n)};
  } else if (auto* c = std::get_if<CyclicEl>(&data)) {
    const auto& d = std::get<CyclicEl>(rhs.data);
    if (c->mod != d.mod) throw std::logic_error("cyclic modulus mismatch");
    out.data = CyclicEl{mod_pos(c->n + d.n, c->mod), c->mod};
  } else if (auto* t = std::get_if<TupleEl>(&data)) {
    const auto& u = std::get<TupleEl>(rhs.data);
    if (t->v.size() != u.v.size()) throw std::logic_error("tuple rank mismatch");
    TupleEl r;
    r.v.resize(t->v.size());
    for (std::size_t i = 0; i < t->v.size(); ++i) r.v[i] = ck_add(t->v[i], u.v[i]);
    out.data = r;
  } else if (auto* m = std::get_if<Mat2El>(&data)) {
    const auto& n = std::get<Mat2El>(rhs.data);
    Mat2El r;
    r.a = ck_add(ck_mul(m->a, n.a), ck_mul(m->b, n.c));
    r.b = ck_add(ck_mul(m->a, n.b), ck_mul(m->b, n.d));
    r.c = ck_add(ck_mul(m->c, n.a), ck_mul(m->d, n.c));
    r.d = ck_add(ck_mul(m->c, n.b), ck_mul(m->d, n.d));
    out.data = r;
  } else if (auto* q = std::get_if<QuatEl>(&data)) {
    out.data = quat_mul(*q, std::get<QuatEl>(rhs.data));
  } else {
    const auto& w1 = std::get<WordEl>(data).w;
    const auto& w2 = std::get<WordEl>(rhs.data).w;
    out.data = WordEl{word_concat_reduce(w1, w2)};
  }
  return out;
}

Element Element::inverse() const {
  Element out;
  if (auto* a = std::get_if<IntEl>(&data)) {
    out.data = IntEl{-a->n};
  } else if (auto* c = std::get_if<CyclicEl>(&data)) {
    out.data = CyclicEl{mod_pos(-c->n, c->mod), c->mod};
  } else if (auto* t = std::get_if<TupleEl>(&data)) {
    TupleEl r;
    r.v.reserve(t->v.size());
    for (long long x : t->v) r.v.push_back(-x);
    out.data = r;
  } else if (auto* m = std::get_if<Mat2El>(&data)) {
    out.data = Mat2El{m->d, -m->b, -m->c, m->a};
  } else if (auto* q = std::get_if<QuatEl>(&data)) {
    out.data = QuatEl{{q->q[0], -q->q[1], -q->q[2], -q->q[3]}, q->k};
  } else {
    const auto& w = std::get<WordEl>(data).w;
    WordEl r;
    r.w.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) r.w.push_back(-*it);
    out.data = r;
  }
  return out;
}

bool Element::is_identity() const {
  if (auto* a = std::get_if<IntEl>(&data)) return a->n == 0;
  if (auto* c = std::get_if<CyclicEl>(&data)) return c->n == 0;
  if (auto* t = std::get_if<TupleEl>(&data))
    return std::all_of(t->v.begin(), t->v.end(), [](long long x) { return x == 0; });
  if (auto* m = std::get_if<Mat2El>(&data)) return m->a == 1 && m->b == 0 && m->c == 0 && m->d == 1;
  if (auto* q = std::get_if<QuatEl>(&data))
    return q->k == 0 && q->q[0] == 1 && q->q[1] == 0 && q->q[2] == 0 && q->q[3] == 0;
  return std::get<WordEl>(data).w.empty();
}

Key Element::key() const {
  Key k;
  if (auto* a = std::get_if<IntEl>(&data)) {
    k = {0, a->n};
  } else if (auto* c = std::get_if<CyclicEl>(&data)) {
    k = {1, c->n};
  } else if (auto* t = std::get_if<TupleEl>(&data)) {
    k.push_back(2);
    k.insert(k.end(), t->v.begin(), t->v.end());
  } else if (auto* m = std::get_if<Mat2El>(&data)) {
    k = {3, m->a, m->b, m->c, m->d};
  } else if (auto* q = std::get_if<QuatEl>(&data)) {
    k = {4, q->k, q->q[0], q->q[1], q->q[2], q->q[3]};
  } else {
    const auto& w = std::get<WordEl>(data).w;
    k.push_back(5);
    for (int letter : w) k.push_back(letter);
  }
  return k;
}

std::vector<BallEntry> word_ball(const GroupPresentation& g, int radius, std::size_t cap) {
  std::map<Key, BallEntry> seen;
  BallEntry id{g.identity, 0, {}};
  seen.emplace(g.identity.key(), id);
  std::vector<BallEntry> layer{id};
  for (int len = 1; len <= radius && !layer.empty(); ++len) {
    std::vector<BallEntry> next;
    for (const auto& e : layer) {
      for (std::size_t j = 0; j < g.gens.size(); ++j) {
        Element cand = g.gens[j].g.mul(e.g);
        Key k = cand.key();
        if (seen.count(k)) continue;
        BallEntry ne;
        ne.g = cand;
        ne.length = len;
        ne.word = e.word;
        ne.word.push_back(static_cast<int>(j));
        seen.emplace(k, ne);
        next.push_back(ne);
        if (seen.size() > cap)
          throw std::runtime_error("word ball cap exceeded: " + std::to_string(seen.size()) +
                                   " elements at radius " + std::to_string(len));
      }
    }
    std::sort(next.begin(), next.end(),
              [](const BallEntry& a, const BallEntry& b) { return a.g.key() < b.g.key(); });
    layer = std::move(next);
  }
  std::vector<BallEntry> out;
  out.reserve(seen.size());
  for (auto& [k, e] : seen) out.push_back(e);
  std::sort(out.begin(), out.end(), [](const BallEntry& a, const BallEntry& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.g.key() < b.g.key();
  });
  return out;
}

Element element_of_word(const GroupPresentation& g, const std::vector<int>& word) {
  Element e = g.identity;
  for (int idx : word) e = g.gens.at(static_cast<std::size_t>(idx)).g.mul(e);
  return e;
}

std::vector<int> inverse_word(const GroupPresentation& g, const std::vector<int>& word) {
  std::vector<int> out;
  out.reserve(word.size());
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    out.push_back(g.gens.at(static_cast<std::size_t>(*it)).inverse_index);
  return out;
}

GroupPresentation trivial_presentation() {
  GroupPresentation g;
  g.name = "trivial";
  g.identity.data = IntEl{0};
  return g;
}

GroupPresentation z_presentation() {
  GroupPresentation g;
  g.name = "Z";
  g.identity.data = IntEl{0};
  g.gens = {{"s", Element{IntEl{1}}, 1}, {"s_inv", Element{IntEl{-1}}, 0}};
  return g;
}

GroupPresentation cyclic_presentation(long long mod) {
  if (mod < 2) throw std::invalid_argument("cyclic modulus must be >= 2");
  GroupPresentation g;
  g.name = "Z/" + std::to_string(mod);
  g.identity.data = CyclicEl{0, mod};
  g.gens = {{"s", Element{CyclicEl{1, mod}}, 1}, {"s_inv", Element{CyclicEl{mod - 1, mod}}, 0}};
  if (mod == 2) {
    g.gens = {{"s", Element{CyclicEl{1, 2}}, 0}};
    g.gens[0].inverse_index = 0;
  }
  return g;
}

GroupPresentation zd_presentation(int d) {
  if (d < 1) throw std::invalid_argument("rank must be >= 1");
  GroupPresentation g;
  g.name = "Z^" + std::to_string(d);
  TupleEl id;
  id.v.assign(static_cast<std::size_t>(d), 0);
  g.identity.data = id;
  for (int i = 0; i < d; ++i) {
    TupleEl e = id, einv = id;
    e.v[static_cast<std::size_t>(i)] = 1;
    einv.v[static_cast<std::size_t>(i)] = -1;
    std::string base = "e" + std::to_string(i + 1);
    g.gens.push_back({base, Element{e}, 2 * i + 1});
    g.gens.push_back({base + "_inv", Element{einv}, 2 * i});
  }
  return g;
}

GroupPresentation free_presentation(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  GroupPresentation g;
  g.name = "F" + std::to_string(rank);
  g.identity.data = WordEl{};
  for (int i = 1; i <= rank; ++i) {
    std::string base = "a" + std::to_string(i);
    g.gens.push_back({base, Element{WordEl{{i}}}, 2 * (i - 1) + 1});
    g.gens.push_back({base + "_inv", Element{WordEl{{-i}}}, 2 * (i - 1)});
  }
  return g;
}

GroupPresentation sl2z_presentation() {
  GroupPresentation g;
  g.name = "SL2Z";
  g.identity.data = Mat2El{};
  g.gens = {
      {"T", Element{Mat2El{1, 1, 0, 1}}, 1},
      {"T_inv", Element{Mat2El{1, -1, 0, 1}}, 0},
      {"R", Element{Mat2El{0, -1, 1, 0}}, 3},
      {"R_inv", Element{Mat2El{0, 1, -1, 0}}, 2},
  };
  return g;
}

GroupPresentation quat_f2_presentation() {
  GroupPresentation g;
  g.name = "quat_free2";
  g.identity.data = QuatEl{};
  g.gens = {
      {"u", Element{QuatEl{{2, 1, 0, 0}, 1}}, 1},
      {"u_inv", Element{QuatEl{{2, -1, 0, 0}, 1}}, 0},
      {"v", Element{QuatEl{{2, 0, 0, 1}, 1}}, 3},
      {"v_inv", Element{QuatEl{{2, 0, 0, -1}, 1}}, 2},
  };
  return g;
}

}  // namespace warpcone
