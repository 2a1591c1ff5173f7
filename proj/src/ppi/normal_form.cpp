// SPDX-License-Identifier: MIT
#include "pcw/ppi.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace pcw {

namespace {

// Blocks with more restricted names than this are ordered by a heuristic instead of
// trying every permutation; congruent terms may then get different normal forms.
constexpr std::size_t kMaxPermutedNames = 6;

class Normaliser {
 public:
  explicit Normaliser(const Ppi& top) {
    // Every bound name becomes kind_prefix%<tag><level>; the tag keeps these apart
    // from free names of the input.
    auto clashes = [&](const std::string& t) {
      for (const auto& x : top.free_names())
        if (x.find("%" + t) != std::string::npos) return true;
      return false;
    };
    while (clashes(tag_)) tag_ += "b";
  }

  Ppi term(const Ppi& p, unsigned level) {
    std::vector<Ppi> atoms;
    std::vector<std::string> names;
    flatten(p, {}, atoms, names);

    // connect atoms through shared live restricted names
    std::vector<std::size_t> parent(atoms.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    std::vector<std::string> live;
    for (const auto& x : names) {
      std::size_t first = atoms.size();
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!atoms[i].free_names().count(x)) continue;
        if (first == atoms.size()) first = i;
        else parent[find(i)] = find(first);
      }
      if (first != atoms.size()) live.push_back(x);
    }

    std::map<std::size_t, std::pair<std::vector<Ppi>, std::vector<std::string>>> blocks;
    for (std::size_t i = 0; i < atoms.size(); ++i) blocks[find(i)].first.push_back(atoms[i]);
    for (const auto& x : live)
      for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].free_names().count(x)) {
          blocks[find(i)].second.push_back(x);
          break;
        }

    std::vector<Ppi> items;
    for (auto& [root, blk] : blocks) {
      if (blk.second.empty()) {
        for (const auto& a : blk.first) items.push_back(atom(a, level));
      } else {
        items.push_back(block(blk.first, blk.second, level));
      }
    }
    std::sort(items.begin(), items.end());
    return ppi_par(items);
  }

 private:
  std::string canon(const std::string& like, unsigned level) const {
    return kind_prefix(name_kind(like)) + "%" + tag_ + std::to_string(level);
  }

  void flatten(const Ppi& p, const NameMap& ren, std::vector<Ppi>& atoms, std::vector<std::string>& names) {
    const auto& n = p.node();
    switch (n.kind) {
      case PpiKind::par:
        flatten(n.kids[0], ren, atoms, names);
        flatten(n.kids[1], ren, atoms, names);
        break;
      case PpiKind::nil:
        break;
      case PpiKind::restrict: {
        if (!n.kids[0].free_names().count(n.chan)) {
          flatten(n.kids[0], ren, atoms, names);
          break;
        }
        std::string t = kind_prefix(name_kind(n.chan)) + "%\x01" + std::to_string(tmp_++);
        NameMap inner = ren;
        inner[n.chan] = t;
        names.push_back(t);
        flatten(n.kids[0], inner, atoms, names);
        break;
      }
      default:
        atoms.push_back(ppi_subst(p, ren));
    }
  }

  // Binds ys canonically at level.., normalising the continuation below them.
  std::pair<std::vector<std::string>, Ppi> under(const std::vector<std::string>& ys, const Ppi& cont,
                                                 unsigned level) {
    NameMap s;
    std::vector<std::string> cs;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      cs.push_back(canon(ys[j], level + static_cast<unsigned>(j)));
      s[ys[j]] = cs.back();
    }
    return {cs, term(ppi_subst(cont, s), level + static_cast<unsigned>(ys.size()))};
  }

  Ppi atom(const Ppi& a, unsigned level) {
    std::string ck = std::to_string(level) + ":" + a.key();
    auto hit = cache_.find(ck);
    if (hit != cache_.end()) return hit->second;
    const auto& n = a.node();
    Ppi out = a;
    switch (n.kind) {
      case PpiKind::branch_in:
      case PpiKind::select_out: {
        std::vector<PpiBranch> bs;
        for (const auto& b : n.branches) {
          auto [cs, c] = under(b.names, b.cont, level);
          bs.push_back({b.index, b.p, std::move(cs), std::move(c)});
        }
        out = n.kind == PpiKind::branch_in ? ppi_branch_in(n.chan, std::move(bs))
                                           : ppi_select_out(n.chan, std::move(bs));
        break;
      }
      case PpiKind::input:
      case PpiKind::rep_in: {
        auto [cs, c] = under(n.names, n.kids[0], level);
        out = n.kind == PpiKind::input ? ppi_input(n.chan, std::move(cs), std::move(c))
                                       : ppi_rep_in(n.chan, std::move(cs), std::move(c));
        break;
      }
      case PpiKind::output:
        out = ppi_output(n.chan, n.names, term(n.kids[0], level));
        break;
      default:
        break;
    }
    cache_.emplace(std::move(ck), out);
    return out;
  }

  // One connected group: try every order of its names and keep the least rendering.
  Ppi block(const std::vector<Ppi>& atoms, std::vector<std::string> names, unsigned level) {
    const unsigned k = static_cast<unsigned>(names.size());
    auto render = [&](const std::vector<std::string>& order, std::vector<Ppi>& out) {
      NameMap s;
      for (unsigned j = 0; j < k; ++j) s[order[j]] = canon(order[j], level + j);
      out.clear();
      for (const auto& a : atoms) out.push_back(atom(ppi_subst(a, s), level + k));
      std::sort(out.begin(), out.end());
      std::string r;
      for (const auto& a : out) r += a.key() + "|";
      return r;
    };

    std::vector<std::string> order;
    if (k > kMaxPermutedNames) {
      order = heuristic_order(atoms, names);
    } else {
      std::vector<std::size_t> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      std::string best;
      std::vector<Ppi> tmp;
      bool first = true;
      do {
        std::vector<std::string> cand;
        for (auto i : idx) cand.push_back(names[i]);
        std::string r = render(cand, tmp);
        // kinds take part in the rendering through the canonical names
        if (first || r < best) {
          best = std::move(r);
          order = std::move(cand);
          first = false;
        }
      } while (std::next_permutation(idx.begin(), idx.end()));
    }
    std::vector<Ppi> body;
    render(order, body);
    std::vector<std::string> cs;
    for (unsigned j = 0; j < k; ++j) cs.push_back(canon(order[j], level + j));
    return ppi_restrict(cs, ppi_par(body));
  }

  std::vector<std::string> heuristic_order(const std::vector<Ppi>& atoms, const std::vector<std::string>& names) {
    NameMap blank;
    for (const auto& x : names) blank[x] = kind_prefix(name_kind(x)) + "%\x02";
    std::vector<std::pair<std::string, std::size_t>> shaped;
    for (std::size_t i = 0; i < atoms.size(); ++i) shaped.emplace_back(ppi_subst(atoms[i], blank).key(), i);
    std::sort(shaped.begin(), shaped.end());
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& [key, i] : shaped)
      for (const auto& x : names)
        if (atoms[i].free_names().count(x) && seen.insert(x).second) order.push_back(x);
    return order;
  }

  std::string tag_ = "b";
  unsigned tmp_ = 0;
  std::unordered_map<std::string, Ppi> cache_;
};

}  // namespace

Ppi ppi_normal_form(const Ppi& p) { return Normaliser(p).term(p, 0); }

bool ppi_struct_congruent(const Ppi& a, const Ppi& b) {
  if (a == b) return true;
  if (a.free_names() != b.free_names()) return false;
  return ppi_normal_form(a) == ppi_normal_form(b);
}

Distribution<Ppi> ppi_normal_form(const Distribution<Ppi>& d) {
  return d.map([](const Ppi& p) { return ppi_normal_form(p); });
}

bool ppi_struct_congruent(const Distribution<Ppi>& a, const Distribution<Ppi>& b) {
  return ppi_normal_form(a) == ppi_normal_form(b);
}

}  // namespace pcw
