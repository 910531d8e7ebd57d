#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symsched/error.hpp"

namespace symsched {

// images[i] is where i goes. Composition is (a∘b)(i) = a(b(i)).
struct Perm {
  std::vector<int> images;

  int degree() const { return static_cast<int>(images.size()); }
  static Perm identity(int n);
  static Perm cycle(int n, int k = 1);  // i -> i+k mod n
};

Perm perm_compose(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& a);
bool perm_valid(const Perm& a);

struct GroupElement;

// residues per coordinate; the owning group holds the moduli (0 means Z)
struct ModVec {
  std::vector<long long> r;
};

struct WreathTuple {
  std::vector<GroupElement> base;
  Perm top;
};

struct ProductTuple {
  std::vector<GroupElement> parts;
};

struct GroupElement {
  std::variant<Perm, ModVec, WreathTuple, ProductTuple> v;

  GroupElement() : v(Perm{}) {}
  GroupElement(Perm p) : v(std::move(p)) {}
  GroupElement(ModVec m) : v(std::move(m)) {}
  GroupElement(WreathTuple w) : v(std::move(w)) {}
  GroupElement(ProductTuple t) : v(std::move(t)) {}

  bool is_perm() const { return std::holds_alternative<Perm>(v); }
  bool is_modvec() const { return std::holds_alternative<ModVec>(v); }
  bool is_wreath() const { return std::holds_alternative<WreathTuple>(v); }
  bool is_product() const { return std::holds_alternative<ProductTuple>(v); }
  const Perm& perm() const { return std::get<Perm>(v); }
  const ModVec& modvec() const { return std::get<ModVec>(v); }
  const WreathTuple& wreath() const { return std::get<WreathTuple>(v); }
  const ProductTuple& product() const { return std::get<ProductTuple>(v); }
};

GroupElement modvec(std::vector<long long> r);
GroupElement tuple(std::vector<GroupElement> parts);

// Canonical flat encoding; defines equality, the total order and hashing.
std::vector<long long> encode(const GroupElement& g);
bool operator==(const GroupElement& a, const GroupElement& b);
bool operator!=(const GroupElement& a, const GroupElement& b);
bool operator<(const GroupElement& a, const GroupElement& b);
std::string to_string(const GroupElement& g);

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const;
};

// A word is a product gens[s1]^p1 ∘ gens[s2]^p2 ∘ ...
using Word = std::vector<std::pair<int, long long>>;

enum class GroupKind { Abelian, Symmetric, Shift, Product, Wreath, Generated };

constexpr std::size_t kDefaultEnumerationCap = 1000000;

class FiniteGroup {
 public:
  FiniteGroup();  // trivial group

  GroupKind kind() const;
  const std::string& name() const;
  const std::vector<GroupElement>& generators() const;
  const std::vector<std::string>& generator_names() const;
  std::size_t enumeration_cap() const;
  FiniteGroup with_cap(std::size_t cap) const;

  // family parameters
  const std::vector<long long>& moduli() const;  // Abelian
  int n() const;                                 // Symmetric degree, Shift q
  const std::vector<FiniteGroup>& factors() const;  // Product; Wreath {base, top}; Generated {parent}
  int blocks() const;                               // Wreath
  const FiniteGroup& parent() const;                // Generated

  GroupElement identity() const;
  GroupElement compose(const GroupElement& a, const GroupElement& b) const;
  GroupElement inverse(const GroupElement& a) const;
  GroupElement power(const GroupElement& a, long long k) const;
  void check(const GroupElement& a) const;  // throws StructureMismatch
  bool matches(const GroupElement& a) const;
  bool contains(const GroupElement& a) const;

  // nullopt when infinite or beyond 64 bits
  std::optional<std::uint64_t> order() const;

  bool is_perm_group() const;
  int degree() const;
  int act(const GroupElement& g, int point) const;
  Perm as_perm(const GroupElement& g) const;
  std::optional<GroupElement> from_perm(const Perm& p) const;

  std::vector<GroupElement> enumerate() const;  // sorted
  std::vector<std::pair<GroupElement, Word>> enumerate_with_words() const;  // BFS order
  Word express(const GroupElement& g) const;
  GroupElement eval_word(const Word& w) const;

  bool same_as(const FiniteGroup& other) const;  // descriptor equality

  struct Impl;

 private:
  explicit FiniteGroup(std::shared_ptr<const Impl> p) : p_(std::move(p)) {}
  std::shared_ptr<const Impl> p_;

  friend FiniteGroup abelian(std::vector<long long> moduli);
  friend FiniteGroup symmetric(int n);
  friend FiniteGroup shift(int q);
  friend FiniteGroup product(std::vector<FiniteGroup> factors);
  friend FiniteGroup wreath(const FiniteGroup& base, int blocks, const FiniteGroup& top);
  friend FiniteGroup generated(const FiniteGroup& parent, std::vector<GroupElement> gens,
                               std::string name);
};

// Z/m1 × Z/m2 × ... with unit-vector generators; modulus 0 stands for Z
FiniteGroup abelian(std::vector<long long> moduli);
FiniteGroup cyclic(long long q);
FiniteGroup trivial_group();
// generators (0 1) and, for n ≥ 3, the n-cycle i -> i+1
FiniteGroup symmetric(int n);
// ⟨σ→⟩ inside S_q, σ→(i) = i+1 mod q
FiniteGroup shift(int q);
FiniteGroup product(std::vector<FiniteGroup> factors);
// base must act on points if the wreath is to act; top is a permutation group on [blocks]
FiniteGroup wreath(const FiniteGroup& base, int blocks, const FiniteGroup& top);
// iterwr(m,1) = S_m, iterwr(m,k) = iterwr(m,k-1) ≀ S_m
FiniteGroup iterated_wreath(int m, int k);
FiniteGroup generated(const FiniteGroup& parent, std::vector<GroupElement> gens,
                      std::string name = "");

GroupElement compose(const FiniteGroup& G, const GroupElement& a, const GroupElement& b);
GroupElement inverse(const FiniteGroup& G, const GroupElement& a);
std::vector<GroupElement> enumerate(const FiniteGroup& G);

class Homomorphism {
 public:
  Homomorphism() = default;

  const FiniteGroup& source() const { return source_; }
  const FiniteGroup& target() const { return target_; }
  const std::vector<GroupElement>& images() const { return images_; }
  bool validated() const { return validated_; }

  GroupElement apply(const GroupElement& g) const;

 private:
  FiniteGroup source_, target_;
  std::vector<GroupElement> images_;
  bool validated_ = false;
  // full table when the source was enumerated during validation
  std::shared_ptr<const std::vector<std::pair<GroupElement, GroupElement>>> table_;

  friend Homomorphism make_hom(const FiniteGroup&, const FiniteGroup&, std::vector<GroupElement>);
  friend Homomorphism make_hom_unchecked(const FiniteGroup&, const FiniteGroup&,
                                         std::vector<GroupElement>);
};

Homomorphism make_hom(const FiniteGroup& source, const FiniteGroup& target,
                      std::vector<GroupElement> images);
// no validation; validated() is false
Homomorphism make_hom_unchecked(const FiniteGroup& source, const FiniteGroup& target,
                                std::vector<GroupElement> images);
Homomorphism identity_hom(const FiniteGroup& G);
// outer ∘ inner
Homomorphism compose_hom(const Homomorphism& outer, const Homomorphism& inner);
GroupElement apply_hom(const Homomorphism& rho, const GroupElement& g);

// nullopt when the images define a homomorphism, else a witness description.
// Exhaustive under the source cap, relation-based above it.
std::optional<std::string> hom_failure(const FiniteGroup& source, const FiniteGroup& target,
                                       const std::vector<GroupElement>& images);

}  // namespace symsched
