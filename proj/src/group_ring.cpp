#include "algdyn/group_ring.hpp"

#include <sstream>

#include "algdyn/error.hpp"

namespace algdyn {

namespace {

void check_element(const GroupElement& x, const GroupSpec& g)
{
    if (x.size() != g.coordinates())
        throw InputError("group element has " + std::to_string(x.size()) + " coordinates, expected " +
                         std::to_string(g.coordinates()));
}

} // namespace

GroupSpec GroupSpec::free_abelian(std::size_t d)
{
    if (d == 0) throw InputError("free abelian group needs rank at least 1");
    return {Kind::free_abelian, d};
}

std::string GroupSpec::name() const
{
    return kind == Kind::heisenberg ? "heisenberg" : "Z^" + std::to_string(d);
}

GroupElement group_identity(const GroupSpec& g)
{
    return GroupElement(g.coordinates(), 0);
}

GroupElement group_mul(const GroupElement& x, const GroupElement& y, const GroupSpec& g)
{
    check_element(x, g);
    check_element(y, g);
    GroupElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    if (g.kind == GroupSpec::Kind::heisenberg) z[2] += x[1] * y[0];
    return z;
}

GroupElement group_inverse(const GroupElement& x, const GroupSpec& g)
{
    check_element(x, g);
    GroupElement z(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = -x[i];
    if (g.kind == GroupSpec::Kind::heisenberg) z[2] += x[0] * x[1];
    return z;
}

mpz_class GroupRingElement::coeff(const GroupElement& g) const
{
    const auto it = terms_.find(g);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

void GroupRingElement::add_term(const GroupElement& g, const mpz_class& c)
{
    check_element(g, group_);
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(g, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

GroupRingElement operator*(const GroupRingElement& x, const GroupRingElement& y)
{
    if (!(x.group_ == y.group_)) throw InputError("group ring elements over different groups");
    GroupRingElement z(x.group_);
    for (const auto& [g, a] : x.terms_)
        for (const auto& [h, b] : y.terms_) z.add_term(group_mul(g, h, x.group_), a * b);
    return z;
}

GroupRingElement operator+(GroupRingElement x, const GroupRingElement& y)
{
    if (!(x.group_ == y.group_)) throw InputError("group ring elements over different groups");
    for (const auto& [g, c] : y.terms_) x.add_term(g, c);
    return x;
}

GroupRingElement GroupRingElement::from_laurent(const LaurentPoly& f)
{
    if (!f.ring().is_integers()) throw InputError("group ring elements need integer coefficients");
    GroupRingElement x(GroupSpec::free_abelian(f.dim()));
    for (const auto& [e, c] : f.terms()) x.add_term(e, c);
    return x;
}

GroupRingElement GroupRingElement::from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw InputError("group ring JSON must be an object");
    const std::string name = j.value("group", std::string("Z^d"));
    GroupSpec spec;
    if (name == "heisenberg") {
        spec = GroupSpec::heisenberg();
    } else if (name.rfind("Z", 0) == 0) {
        std::size_t d = j.value("d", std::size_t{0});
        if (d == 0 && name.size() > 2 && name[1] == '^' && name != "Z^d") d = std::stoul(name.substr(2));
        if (d == 0 && j.contains("terms") && !j["terms"].empty()) d = j["terms"][0].at("g").size();
        spec = GroupSpec::free_abelian(d);
    } else {
        throw InputError("unknown group '" + name + "'");
    }
    GroupRingElement x(spec);
    for (const auto& t : j.at("terms")) {
        const auto& c = t.at("c");
        const mpz_class coeff = c.is_string() ? mpz_class(c.get<std::string>()) : mpz_class(c.get<long>());
        x.add_term(t.at("g").get<GroupElement>(), coeff);
    }
    return x;
}

std::string GroupRingElement::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        os << abs(c) << "*[";
        for (std::size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i];
        os << "]";
    }
    return os.str();
}

GroupRingElement adjoint(const GroupRingElement& f)
{
    GroupRingElement out(f.group());
    for (const auto& [g, c] : f.terms()) out.add_term(group_inverse(g, f.group()), c);
    return out;
}

nlohmann::json to_json(const GroupRingElement& f)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [g, c] : f.terms()) terms.push_back({{"g", g}, {"c", c.get_str()}});
    nlohmann::json j{{"group", f.group().kind == GroupSpec::Kind::heisenberg ? "heisenberg" : "Z^d"}, {"terms", terms}};
    if (f.group().kind == GroupSpec::Kind::free_abelian) j["d"] = f.group().d;
    return j;
}

} // namespace algdyn
