#pragma once

// Integer group rings of Z^d and of the discrete Heisenberg group.
//
// Heisenberg elements are normal forms u^a v^b w^c, w central, vu = wuv. Moving u^{a'}
// left past v^b produces w^{b a'}:
//   (a, b, c) (a', b', c') = (a + a', b + b', c + c' + b a'),
// so v u = (0,1,0)(1,0,0) = (1,1,1) = uvw, and (a, b, c)^{-1} = (-a, -b, -c + a b).

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "algdyn/laurent.hpp"

namespace algdyn {

struct GroupSpec {
    enum class Kind { free_abelian, heisenberg };
    Kind kind = Kind::free_abelian;
    std::size_t d = 1;   // rank for free_abelian; 3 coordinates for heisenberg

    static GroupSpec free_abelian(std::size_t d);
    static GroupSpec heisenberg() { return {Kind::heisenberg, 3}; }

    std::size_t coordinates() const { return d; }
    bool commutative() const { return kind == Kind::free_abelian; }
    std::string name() const;
    friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

using GroupElement = std::vector<std::int64_t>;

GroupElement group_identity(const GroupSpec& g);
GroupElement group_mul(const GroupElement& x, const GroupElement& y, const GroupSpec& g);
GroupElement group_inverse(const GroupElement& x, const GroupSpec& g);

class GroupRingElement {
public:
    using Terms = std::map<GroupElement, mpz_class>;

    explicit GroupRingElement(GroupSpec group) : group_(group) {}

    static GroupRingElement from_laurent(const LaurentPoly& f);
    /// {"group":"heisenberg"|"Z^d","d":d,"terms":[{"g":[a,b,c],"c":5},...]}
    static GroupRingElement from_json(const nlohmann::json& j);

    const GroupSpec& group() const { return group_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    mpz_class coeff(const GroupElement& g) const;
    void add_term(const GroupElement& g, const mpz_class& c);

    friend GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y);
    friend GroupRingElement operator+(GroupRingElement x, const GroupRingElement& y);
    friend bool operator==(const GroupRingElement&, const GroupRingElement&) = default;

    std::string to_string() const;

private:
    GroupSpec group_;
    Terms terms_;
};

/// f* = sum f_g g^{-1}.
GroupRingElement adjoint(const GroupRingElement& f);

nlohmann::json to_json(const GroupRingElement& f);

} // namespace algdyn
