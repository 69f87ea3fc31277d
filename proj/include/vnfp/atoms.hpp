#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vnfp/ext_scalar.hpp"

namespace vnfp {

enum class Separability { Separable, Nonseparable, Unknown };

/// Structural attributes of a named generator algebra.
struct AtomAttrs {
  bool abelian = false;
  bool diffuse = false;
  Separability separability = Separability::Unknown;
  bool self_symmetric = false;
  /// Trace of the maximal purely non-separable central projection, when known.
  std::optional<ExtScalar> ns_mass;

  friend bool operator==(const AtomAttrs&, const AtomAttrs&) = default;
};

/// Applies defaults and inference to declared attributes:
/// abelian and diffuse imply self-symmetric; separable implies ns_mass 0;
/// nonseparable abelian defaults to ns_mass 1. Throws AttributeConflict.
AtomAttrs complete_attrs(AtomAttrs declared);

/// Separable, diffuse and abelian: identified with the built-in LZ.
bool is_lz_like(const AtomAttrs& attrs);

inline constexpr std::string_view kLZName = "LZ";

/// Atom registry. The built-in LZ is always present; user atoms are added
/// with declare() and the table is read-only afterwards.
class AtomTable {
public:
  AtomTable();

  /// Throws DuplicateAtomDecl when the name is taken.
  void declare(const std::string& name, const AtomAttrs& attrs);

  /// Adds every user atom of `other`; identical redeclarations are accepted.
  void merge(const AtomTable& other);

  const AtomAttrs* find(std::string_view name) const;
  const AtomAttrs& at(std::string_view name) const;  // throws UnknownAtom
  bool contains(std::string_view name) const { return find(name) != nullptr; }

  /// User-declared names in sorted order (the built-in LZ excluded).
  std::vector<std::string> user_atoms() const;

private:
  std::map<std::string, AtomAttrs, std::less<>> atoms_;
};

struct ProfileEntry {
  std::string atom;
  ExtScalar weight;

  friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// Weighted direct sum of atoms, the algebra an F-form is built over.
/// Normalized profiles are sorted by atom name, have no duplicates, and their
/// weights lie in (0, 1] and sum to 1.
struct AtomProfile {
  std::vector<ProfileEntry> entries;

  static AtomProfile single(std::string atom);

  bool contains(std::string_view atom) const;
  /// Weight of LZ in the profile (0 when absent).
  ExtScalar lz_weight() const;
  bool has_non_lz() const;

  friend bool operator==(const AtomProfile&, const AtomProfile&) = default;
};

/// Identifies LZ-like atoms with LZ, merges duplicates (self-symmetric atoms
/// only), and sorts. Throws WeightSumNotOne, UnknownAtom, MergeOnNonSelfSymmetric.
AtomProfile normalize_profile(std::vector<ProfileEntry> entries, const AtomTable& atoms);

/// Sum of weight * ns_mass; nullopt when some atom has no known mass.
std::optional<ExtScalar> profile_ns_mass(const AtomProfile& profile, const AtomTable& atoms);

/// Direct sum of two normalized profiles with weights a and 1 - a, normalized.
AtomProfile mix_profiles(const AtomProfile& p, const ExtScalar& a, const AtomProfile& q,
                         const AtomTable& atoms);

}  // namespace vnfp
