#pragma once

#include "json.hpp"
#include "semantics.hpp"
#include "syntax.hpp"

namespace mltk {

// Frame files are JSON:
//   atoms:     {name: size}
//   universe:  [type strings]
//   arrows:    {type string: "standard" | [[output index per input] ...]}
//   constants: {name: element index}
// Optional keys: "state": {atom: budget}, naming the state atoms, and
// "signature": {constant: type string}. Without a signature, a constant's type
// is looked up in the workspace passed in.
struct LoadedFrame {
    Frame frame;
    Parameter param;
    Signature sig;
    std::map<std::string, Type> atoms;
};

inline LoadedFrame load_frame_json(const nlohmann::json& j, const Workspace* ws = nullptr) {
    auto bad = [](const std::string& m) { return Error(ErrorKind::InvalidFrame, m); };
    if (!j.is_object()) throw bad("frame must be a JSON object");
    LoadedFrame out;
    std::map<std::string, std::uint32_t> sizes;
    for (auto& [name, size] : j.at("atoms").items()) {
        if (!size.is_number_unsigned() || size.get<std::uint64_t>() == 0) throw bad("atom " + name + " needs a positive size");
        sizes[name] = size.get<std::uint32_t>();
    }
    // Atom kinds: "state" key, else the workspace, else entity.
    Workspace local;
    std::set<std::string> state_atoms;
    if (j.contains("state"))
        for (auto& [name, b] : j.at("state").items()) {
            state_atoms.insert(name);
            out.param.set(name, b.is_string() && b.get<std::string>() == "omega" ? Budget::omega()
                                                                                  : Budget(b.get<std::uint32_t>()));
        }
    for (const auto& [name, _] : sizes) {
        bool is_state = state_atoms.count(name) > 0;
        if (!is_state && ws) {
            auto it = ws->atoms().find(name);
            if (it != ws->atoms().end() && it->second.is_state()) {
                is_state = true;
                out.param.set(name, ws->parameter().budget_of_atom(name));
            }
        }
        Decl d;
        d.kind = is_state ? Decl::Kind::State : Decl::Kind::Entity;
        d.name = name;
        d.budget = is_state ? out.param.budget_of_atom(name) : Budget::omega();
        local.declare(d);
        out.atoms[name] = is_state ? Type::state(name) : Type::entity(name);
    }
    std::vector<Type> seeds;
    for (const auto& s : j.at("universe")) seeds.push_back(local.parse_type(s.get<std::string>()));
    for (const auto& [name, t] : out.atoms) seeds.push_back(t);
    TypeUniverse u = TypeUniverse::closure(seeds);
    out.frame = Frame(u, sizes);
    if (j.contains("arrows")) {
        for (auto& [ts, spec] : j.at("arrows").items()) {
            Type t = local.parse_type(ts);
            if (!u.contains(t)) throw bad(ts + " is not in the universe");
            if (!t.is_arrow()) throw bad(ts + " is not an arrow type");
            if (spec.is_string()) {
                if (spec.get<std::string>() != "standard") throw bad("unknown carrier spec for " + ts);
                continue;
            }
            std::uint64_t n = out.frame.carrier_size(t.domain());
            std::vector<Value> tables;
            for (const auto& row : spec) {
                if (row.size() != n) throw bad("a table for " + ts + " must list " + std::to_string(n) + " outputs");
                std::vector<Value> entries;
                for (const auto& k : row) entries.push_back(out.frame.element_at(t.codomain(), k.get<std::uint64_t>()));
                tables.push_back(Value::table(std::move(entries)));
            }
            out.frame.set_explicit(t, tables);
        }
    }
    if (j.contains("signature"))
        for (auto& [name, ts] : j.at("signature").items()) out.sig[name] = local.parse_type(ts.get<std::string>());
    else if (ws)
        out.sig = ws->signature();
    if (j.contains("constants")) {
        for (auto& [name, idx] : j.at("constants").items()) {
            auto it = out.sig.find(name);
            if (it == out.sig.end()) throw bad("constant " + name + " has no declared type");
            out.frame.set_constant(name, it->second, out.frame.element_at(it->second, idx.get<std::uint64_t>()));
        }
    }
    return out;
}

inline nlohmann::json frame_to_json(const Frame& f, const Parameter& p) {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::object();
    for (const auto& [name, size] : f.atom_sizes())
        if (f.universe().atoms().count(name)) j["atoms"][name] = size;
    j["state"] = nlohmann::json::object();
    for (const auto& t : f.universe().types())
        if (t.is_state()) {
            Budget b = p.budget(t);
            if (b.is_omega()) j["state"][t.name()] = "omega";
            else j["state"][t.name()] = b.count();
        }
    j["universe"] = nlohmann::json::array();
    for (const auto& t : f.universe().types()) j["universe"].push_back(t.str());
    j["arrows"] = nlohmann::json::object();
    for (const auto& t : f.universe().types()) {
        if (!t.is_arrow()) continue;
        if (f.is_standard(t)) {
            j["arrows"][t.str()] = "standard";
            continue;
        }
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& table : f.explicit_carriers().at(t)) {
            nlohmann::json row = nlohmann::json::array();
            for (const auto& e : table.entries()) row.push_back(*f.index_of(t.codomain(), e));
            rows.push_back(row);
        }
        j["arrows"][t.str()] = rows;
    }
    j["signature"] = nlohmann::json::object();
    j["constants"] = nlohmann::json::object();
    for (const auto& [name, v] : f.constants()) {
        auto t = f.constant_type(name);
        j["signature"][name] = t->str();
        j["constants"][name] = *f.index_of(*t, v);
    }
    return j;
}

}  // namespace mltk
