#include "vnfp/atoms.hpp"

#include <algorithm>

namespace vnfp {

AtomAttrs complete_attrs(AtomAttrs a) {
  if (a.abelian && a.diffuse) a.self_symmetric = true;
  if (a.separability == Separability::Separable) {
    if (a.ns_mass && !a.ns_mass->is_zero()) {
      throw Error(ErrorCode::AttributeConflict, "separable atom must have mass 0");
    }
    a.ns_mass = ExtScalar(0);
  } else if (a.separability == Separability::Nonseparable && a.abelian && !a.ns_mass) {
    a.ns_mass = ExtScalar(1);
  }
  if (a.ns_mass && (a.ns_mass->is_negative() || *a.ns_mass > ExtScalar(1))) {
    throw Error(ErrorCode::AttributeConflict, "mass must lie in [0, 1], got " + a.ns_mass->str());
  }
  return a;
}

bool is_lz_like(const AtomAttrs& a) {
  return a.abelian && a.diffuse && a.separability == Separability::Separable;
}

AtomTable::AtomTable() {
  atoms_.emplace(std::string(kLZName),
                 AtomAttrs{true, true, Separability::Separable, true, ExtScalar(0)});
}

void AtomTable::declare(const std::string& name, const AtomAttrs& attrs) {
  if (atoms_.count(name) != 0) {
    throw Error(ErrorCode::DuplicateAtomDecl, "atom '" + name + "' declared twice");
  }
  atoms_.emplace(name, complete_attrs(attrs));
}

void AtomTable::merge(const AtomTable& other) {
  for (const auto& [name, attrs] : other.atoms_) {
    auto it = atoms_.find(name);
    if (it == atoms_.end()) {
      atoms_.emplace(name, attrs);
    } else if (!(it->second == attrs)) {
      throw Error(ErrorCode::DuplicateAtomDecl,
                  "atom '" + name + "' declared twice with different attributes");
    }
  }
}

const AtomAttrs* AtomTable::find(std::string_view name) const {
  auto it = atoms_.find(name);
  return it == atoms_.end() ? nullptr : &it->second;
}

const AtomAttrs& AtomTable::at(std::string_view name) const {
  if (const AtomAttrs* a = find(name)) return *a;
  throw Error(ErrorCode::UnknownAtom, "unknown atom '" + std::string(name) + "'");
}

std::vector<std::string> AtomTable::user_atoms() const {
  std::vector<std::string> out;
  for (const auto& [name, attrs] : atoms_) {
    if (name != kLZName) out.push_back(name);
  }
  return out;
}

AtomProfile AtomProfile::single(std::string atom) {
  return AtomProfile{{ProfileEntry{std::move(atom), ExtScalar(1)}}};
}

bool AtomProfile::contains(std::string_view atom) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const ProfileEntry& e) { return e.atom == atom; });
}

ExtScalar AtomProfile::lz_weight() const {
  ExtScalar w(0);
  for (const auto& e : entries) {
    if (e.atom == kLZName) w += e.weight;
  }
  return w;
}

bool AtomProfile::has_non_lz() const {
  return std::any_of(entries.begin(), entries.end(),
                     [](const ProfileEntry& e) { return e.atom != kLZName; });
}

AtomProfile normalize_profile(std::vector<ProfileEntry> entries, const AtomTable& atoms) {
  if (entries.empty()) throw Error(ErrorCode::WeightSumNotOne, "empty profile");
  ExtScalar total(0);
  for (auto& e : entries) {
    if (e.weight.is_infinite() || !e.weight.is_positive() || e.weight > ExtScalar(1)) {
      throw Error(ErrorCode::WeightSumNotOne, "profile weight " + e.weight.str() + " outside (0, 1]");
    }
    total += e.weight;
    if (is_lz_like(atoms.at(e.atom))) e.atom = std::string(kLZName);
  }
  if (total != ExtScalar(1)) {
    throw Error(ErrorCode::WeightSumNotOne, "profile weights sum to " + total.str());
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ProfileEntry& a, const ProfileEntry& b) { return a.atom < b.atom; });
  std::vector<ProfileEntry> merged;
  for (auto& e : entries) {
    if (!merged.empty() && merged.back().atom == e.atom) {
      if (!atoms.at(e.atom).self_symmetric) {
        throw Error(ErrorCode::MergeOnNonSelfSymmetric,
                    "cannot merge copies of non-self-symmetric atom '" + e.atom + "'");
      }
      merged.back().weight += e.weight;
    } else {
      merged.push_back(std::move(e));
    }
  }
  return AtomProfile{std::move(merged)};
}

std::optional<ExtScalar> profile_ns_mass(const AtomProfile& profile, const AtomTable& atoms) {
  ExtScalar total(0);
  for (const auto& e : profile.entries) {
    const AtomAttrs& a = atoms.at(e.atom);
    if (!a.ns_mass) return std::nullopt;
    total += e.weight * *a.ns_mass;
  }
  return total;
}

AtomProfile mix_profiles(const AtomProfile& p, const ExtScalar& a, const AtomProfile& q,
                         const AtomTable& atoms) {
  std::vector<ProfileEntry> all;
  for (const auto& e : p.entries) all.push_back({e.atom, e.weight * a});
  const ExtScalar b = ExtScalar(1) - a;
  for (const auto& e : q.entries) all.push_back({e.atom, e.weight * b});
  return normalize_profile(std::move(all), atoms);
}

}  // namespace vnfp
