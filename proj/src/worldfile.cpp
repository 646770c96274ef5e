#include "valign/worldfile.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "valign/errors.hpp"

namespace valign {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    raise(ErrorCode::parse_error, where + ": " + what);
}

/// Adds entity context to errors thrown while handling DSL texts. Syntax
/// errors are downgraded from ParseError to SchemaMismatch: the document
/// itself parsed, the entity inside it did not validate.
template <typename Fn>
auto with_context(const std::string& context, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        ErrorCode code =
            e.code() == ErrorCode::parse_error ? ErrorCode::schema_mismatch : e.code();
        raise(code, context + ": " + e.what());
    }
}

const json& get_field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(where, std::string("missing key '") + key + "'");
    return *it;
}

void expect_object(const json& v, const std::string& where) {
    if (!v.is_object()) bad(where, "expected an object");
}

void expect_array(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array");
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where, "expected a string");
    return v.get<std::string>();
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            if (it.key() == key) known = true;
        if (!known) bad(where, "unknown key '" + it.key() + "'");
    }
}

VarType parse_var_type(const std::string& text, const std::string& where) {
    if (text == "bool") return VarType::boolean;
    if (text == "int") return VarType::integer;
    if (text == "decimal") return VarType::decimal;
    bad(where, "unknown type '" + text + "' (expected bool, int or decimal)");
}

Decimal decode_decimal(const json& v, const std::string& where) {
    if (v.is_number_integer() || v.is_number_unsigned())
        return Decimal::from_int(v.get<std::int64_t>());
    return Decimal::from_double(get_number(v, where));
}

/// JSON-shape-driven decoding; the declared type only settles whether an
/// integer literal means int or decimal. Shape/type mismatches are left for
/// validate_world to report as schema errors.
VarValue decode_value(const VarDecl* decl, const json& v, const std::string& where) {
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer() || v.is_number_unsigned()) {
        if (decl && decl->type == VarType::decimal)
            return Decimal::from_int(v.get<std::int64_t>());
        return v.get<std::int64_t>();
    }
    if (v.is_number()) return Decimal::from_double(v.get<double>());
    bad(where, "expected a boolean or number");
}

Schema parse_schema(const json& node) {
    expect_object(node, "schema");
    Schema schema;
    for (auto it = node.begin(); it != node.end(); ++it) {
        std::string where = "schema." + it.key();
        expect_object(*it, where);
        check_keys(*it, {"type", "min", "max"}, where);
        VarDecl decl;
        decl.name = it.key();
        decl.type = parse_var_type(get_string(get_field(*it, "type", where), where + ".type"),
                                   where + ".type");
        if (auto f = it->find("min"); f != it->end())
            decl.min = decode_decimal(*f, where + ".min");
        if (auto f = it->find("max"); f != it->end())
            decl.max = decode_decimal(*f, where + ".max");
        schema.variables.push_back(std::move(decl));
    }
    return schema;
}

std::vector<State> parse_states(const json& node, const Schema& schema) {
    expect_array(node, "states");
    std::vector<State> states;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "states[" + std::to_string(i) + "]";
        expect_object(node[i], where);
        check_keys(node[i], {"id", "vars"}, where);
        State state;
        state.id = get_string(get_field(node[i], "id", where), where + ".id");
        const json& vars = get_field(node[i], "vars", where);
        expect_object(vars, where + ".vars");
        for (auto it = vars.begin(); it != vars.end(); ++it)
            state.vars[it.key()] =
                decode_value(schema.find(it.key()), *it, where + ".vars." + it.key());
        states.push_back(std::move(state));
    }
    return states;
}

std::vector<std::string> parse_string_array(const json& node, const std::string& where) {
    expect_array(node, where);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(get_string(node[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<Transition> parse_transitions(const json& node) {
    expect_array(node, "transitions");
    std::vector<Transition> transitions;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "transitions[" + std::to_string(i) + "]";
        expect_object(node[i], where);
        check_keys(node[i], {"from", "action", "to", "prob"}, where);
        Transition t;
        t.from = get_string(get_field(node[i], "from", where), where + ".from");
        t.action = get_string(get_field(node[i], "action", where), where + ".action");
        t.to = get_string(get_field(node[i], "to", where), where + ".to");
        if (auto f = node[i].find("prob"); f != node[i].end())
            t.prob = get_number(*f, where + ".prob");
        transitions.push_back(std::move(t));
    }
    return transitions;
}

std::map<std::string, double> parse_number_map(const json& node, const std::string& where) {
    expect_object(node, where);
    std::map<std::string, double> out;
    for (auto it = node.begin(); it != node.end(); ++it)
        out[it.key()] = get_number(*it, where + "." + it.key());
    return out;
}

std::vector<RawValueSpec> parse_values(const json& node) {
    expect_array(node, "values");
    std::vector<RawValueSpec> values;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "values[" + std::to_string(i) + "]";
        expect_object(node[i], where);
        RawValueSpec spec;
        spec.id = get_string(get_field(node[i], "id", where), where + ".id");
        spec.kind = get_string(get_field(node[i], "kind", where), where + ".kind");
        if (spec.kind == "utility") {
            check_keys(node[i], {"id", "kind", "utilities"}, where);
            spec.utilities =
                parse_number_map(get_field(node[i], "utilities", where), where + ".utilities");
        } else if (spec.kind == "table") {
            check_keys(node[i], {"id", "kind", "entries"}, where);
            const json& entries = get_field(node[i], "entries", where);
            expect_array(entries, where + ".entries");
            for (std::size_t j = 0; j < entries.size(); ++j) {
                std::string ew = where + ".entries[" + std::to_string(j) + "]";
                expect_object(entries[j], ew);
                check_keys(entries[j], {"from", "to", "pref"}, ew);
                RawTableEntry entry;
                entry.from = get_string(get_field(entries[j], "from", ew), ew + ".from");
                entry.to = get_string(get_field(entries[j], "to", ew), ew + ".to");
                entry.pref = get_number(get_field(entries[j], "pref", ew), ew + ".pref");
                spec.entries.push_back(std::move(entry));
            }
        } else if (spec.kind == "predicate") {
            check_keys(node[i], {"id", "kind", "formula", "satisfaction"}, where);
            spec.formula = get_string(get_field(node[i], "formula", where), where + ".formula");
            if (auto f = node[i].find("satisfaction"); f != node[i].end())
                spec.satisfaction = parse_number_map(*f, where + ".satisfaction");
        } else {
            bad(where + ".kind",
                "unknown kind '" + spec.kind + "' (expected utility, table or predicate)");
        }
        values.push_back(std::move(spec));
    }
    return values;
}

std::vector<RawAgent> parse_agents(const json& node) {
    expect_array(node, "agents");
    std::vector<RawAgent> agents;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "agents[" + std::to_string(i) + "]";
        expect_object(node[i], where);
        check_keys(node[i], {"id", "values"}, where);
        RawAgent agent;
        agent.id = get_string(get_field(node[i], "id", where), where + ".id");
        agent.values = parse_string_array(get_field(node[i], "values", where), where + ".values");
        agents.push_back(std::move(agent));
    }
    return agents;
}

std::vector<RawNorm> parse_norms(const json& node) {
    expect_array(node, "norms");
    std::vector<RawNorm> norms;
    for (std::size_t i = 0; i < node.size(); ++i) {
        std::string where = "norms[" + std::to_string(i) + "]";
        expect_object(node[i], where);
        check_keys(node[i], {"id", "rules"}, where);
        RawNorm norm;
        norm.id = get_string(get_field(node[i], "id", where), where + ".id");
        const json& rules = get_field(node[i], "rules", where);
        expect_array(rules, where + ".rules");
        for (std::size_t j = 0; j < rules.size(); ++j) {
            std::string rw = where + ".rules[" + std::to_string(j) + "]";
            expect_object(rules[j], rw);
            check_keys(rules[j], {"when", "forbid", "rewrite"}, rw);
            RawNormRule rule;
            rule.when = get_string(get_field(rules[j], "when", rw), rw + ".when");
            bool has_forbid = rules[j].contains("forbid");
            bool has_rewrite = rules[j].contains("rewrite");
            if (has_forbid == has_rewrite)
                bad(rw, "expected exactly one of 'forbid' or 'rewrite'");
            if (has_forbid) {
                const json& f = rules[j]["forbid"];
                if (!f.is_boolean() || !f.get<bool>()) bad(rw + ".forbid", "expected true");
                rule.forbid = true;
            } else {
                const json& rewrite = rules[j]["rewrite"];
                expect_object(rewrite, rw + ".rewrite");
                if (rewrite.empty()) bad(rw + ".rewrite", "expected at least one assignment");
                for (auto it = rewrite.begin(); it != rewrite.end(); ++it)
                    rule.rewrite.emplace_back(
                        it.key(), get_string(*it, rw + ".rewrite." + it.key()));
            }
            norm.rules.push_back(std::move(rule));
        }
        norms.push_back(std::move(norm));
    }
    return norms;
}

json to_json_number(VarType type, const Decimal& value) {
    if (type == VarType::integer) return value.whole_part();
    return value.to_double();
}

json to_json_value(const VarValue& value) {
    if (const bool* b = std::get_if<bool>(&value)) return *b;
    if (const std::int64_t* i = std::get_if<std::int64_t>(&value)) return *i;
    return std::get<Decimal>(value).to_double();
}

json value_spec_to_json(const std::string& id, const ValueSpec& spec) {
    json out;
    out["id"] = id;
    if (const auto* um = std::get_if<UtilityMap>(&spec.kind)) {
        out["kind"] = "utility";
        json map = json::object();
        for (const auto& [state, u] : um->utilities) map[state] = u;
        out["utilities"] = std::move(map);
    } else if (const auto* table = std::get_if<PairwiseTable>(&spec.kind)) {
        out["kind"] = "table";
        json entries = json::array();
        for (const auto& [key, pref] : table->entries) {
            json entry;
            entry["from"] = key.first;
            entry["to"] = key.second;
            entry["pref"] = pref;
            entries.push_back(std::move(entry));
        }
        out["entries"] = std::move(entries);
    } else {
        const auto& pred = std::get<PredicateSpec>(spec.kind);
        out["kind"] = "predicate";
        out["formula"] = pred.formula.text();
        if (!pred.satisfaction.empty()) {
            json map = json::object();
            for (const auto& [state, p] : pred.satisfaction) map[state] = p;
            out["satisfaction"] = std::move(map);
        }
    }
    return out;
}

} // namespace

const Norm* Scenario::find_norm(const std::string& id) const {
    for (const Norm& n : norms)
        if (n.id == id) return &n;
    return nullptr;
}

const Norm& Scenario::norm(const std::string& id) const {
    if (const Norm* n = find_norm(id)) return *n;
    raise(ErrorCode::unknown_norm, "unknown norm '" + id + "'");
}

RawScenario parse_raw_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::parse_error, e.what());
    }
    expect_object(doc, "document");
    check_keys(doc,
               {"schema", "actions", "states", "transitions", "initial_states", "values",
                "agents", "norms"},
               "document");

    RawScenario raw;
    raw.world.schema = parse_schema(get_field(doc, "schema", "document"));
    raw.world.actions = parse_string_array(get_field(doc, "actions", "document"), "actions");
    raw.world.states = parse_states(get_field(doc, "states", "document"), raw.world.schema);
    raw.world.transitions = parse_transitions(get_field(doc, "transitions", "document"));
    if (auto f = doc.find("initial_states"); f != doc.end())
        raw.world.initial_states = parse_string_array(*f, "initial_states");
    if (auto f = doc.find("values"); f != doc.end()) raw.values = parse_values(*f);
    if (auto f = doc.find("agents"); f != doc.end()) raw.agents = parse_agents(*f);
    if (auto f = doc.find("norms"); f != doc.end()) raw.norms = parse_norms(*f);
    return raw;
}

Scenario build_scenario(RawScenario raw) {
    Scenario scenario;
    scenario.world = validate_world(std::move(raw.world));
    const Schema& schema = scenario.world.schema();

    for (RawValueSpec& rv : raw.values) {
        std::string context = "value '" + rv.id + "'";
        if (scenario.catalog.values.contains(rv.id))
            raise(ErrorCode::schema_mismatch, context + " declared twice");
        ValueSpec spec;
        spec.id = rv.id;
        if (rv.kind == "utility") {
            spec.kind = UtilityMap{std::move(rv.utilities)};
        } else if (rv.kind == "table") {
            PairwiseTable table;
            for (RawTableEntry& entry : rv.entries) {
                auto key = std::make_pair(std::move(entry.from), std::move(entry.to));
                if (!table.entries.emplace(key, entry.pref).second)
                    raise(ErrorCode::schema_mismatch,
                          context + ": duplicate table entry ('" + key.first + "', '" +
                              key.second + "')");
            }
            spec.kind = std::move(table);
        } else {
            PredicateSpec pred;
            pred.formula = with_context(context, [&] { return BoolExpr::parse(rv.formula); });
            pred.satisfaction = std::move(rv.satisfaction);
            spec.kind = std::move(pred);
        }
        with_context(context, [&] { spec.bind(schema); });
        scenario.catalog.values.emplace(rv.id, std::move(spec));
    }

    for (RawAgent& ra : raw.agents) {
        if (scenario.catalog.find_agent(ra.id))
            raise(ErrorCode::schema_mismatch, "agent '" + ra.id + "' declared twice");
        if (ra.values.empty())
            raise(ErrorCode::schema_mismatch, "agent '" + ra.id + "' holds no values");
        Agent agent;
        agent.id = std::move(ra.id);
        for (const std::string& vid : ra.values) {
            auto it = scenario.catalog.values.find(vid);
            if (it == scenario.catalog.values.end())
                raise(ErrorCode::unknown_value,
                      "agent '" + agent.id + "' references unknown value '" + vid + "'");
            agent.bindings.emplace(vid, it->second);
        }
        scenario.catalog.agents.push_back(std::move(agent));
    }

    for (RawNorm& rn : raw.norms) {
        std::string context = "norm '" + rn.id + "'";
        if (scenario.find_norm(rn.id))
            raise(ErrorCode::schema_mismatch, context + " declared twice");
        Norm norm;
        norm.id = std::move(rn.id);
        for (std::size_t j = 0; j < rn.rules.size(); ++j) {
            std::string rule_ctx = context + " rule " + std::to_string(j + 1);
            NormRule rule{with_context(rule_ctx, [&] { return Guard::parse(rn.rules[j].when); }),
                          ForbidEffect{}};
            if (!rn.rules[j].forbid) {
                RewriteEffect rewrite;
                for (auto& [var, text] : rn.rules[j].rewrite) {
                    ArithExpr expr =
                        with_context(rule_ctx, [&] { return ArithExpr::parse(text); });
                    rewrite.assignments.emplace(var, std::move(expr));
                }
                rule.effect = std::move(rewrite);
            }
            norm.rules.push_back(std::move(rule));
        }
        with_context(context, [&] { norm.bind(scenario.world); });
        scenario.norms.push_back(std::move(norm));
    }
    return scenario;
}

Scenario parse_scenario(const std::string& text) {
    return build_scenario(parse_raw_scenario(text));
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::io_error, "cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) raise(ErrorCode::io_error, "cannot read '" + path + "'");
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const Scenario& scenario) {
    const World& world = scenario.world;
    json doc;

    json schema = json::object();
    for (const VarDecl& decl : world.schema().variables) {
        json d;
        d["type"] = to_string(decl.type);
        if (decl.min) d["min"] = to_json_number(decl.type, *decl.min);
        if (decl.max) d["max"] = to_json_number(decl.type, *decl.max);
        schema[decl.name] = std::move(d);
    }
    doc["schema"] = std::move(schema);

    doc["actions"] = json(world.actions());

    json states = json::array();
    for (const auto& [id, state] : world.states()) {
        json s;
        s["id"] = id;
        json vars = json::object();
        for (const auto& [name, value] : state.vars) vars[name] = to_json_value(value);
        s["vars"] = std::move(vars);
        states.push_back(std::move(s));
    }
    doc["states"] = std::move(states);

    json transitions = json::array();
    for (const Transition& t : world.transitions()) {
        json node;
        node["from"] = t.from;
        node["action"] = t.action;
        node["to"] = t.to;
        if (t.prob) node["prob"] = *t.prob;
        transitions.push_back(std::move(node));
    }
    doc["transitions"] = std::move(transitions);

    doc["initial_states"] = json(world.initial_states());

    if (!scenario.catalog.values.empty()) {
        json values = json::array();
        for (const auto& [id, spec] : scenario.catalog.values)
            values.push_back(value_spec_to_json(id, spec));
        doc["values"] = std::move(values);
    }
    if (!scenario.catalog.agents.empty()) {
        json agents = json::array();
        for (const Agent& agent : scenario.catalog.agents) {
            json a;
            a["id"] = agent.id;
            json held = json::array();
            for (const auto& [vid, spec] : agent.bindings) held.push_back(vid);
            a["values"] = std::move(held);
            agents.push_back(std::move(a));
        }
        doc["agents"] = std::move(agents);
    }
    if (!scenario.norms.empty()) {
        json norms = json::array();
        for (const Norm& norm : scenario.norms) {
            json n;
            n["id"] = norm.id;
            json rules = json::array();
            for (const NormRule& rule : norm.rules) {
                json r;
                r["when"] = rule.guard.text();
                if (std::holds_alternative<ForbidEffect>(rule.effect)) {
                    r["forbid"] = true;
                } else {
                    json rewrite = json::object();
                    for (const auto& [var, expr] : std::get<RewriteEffect>(rule.effect).assignments)
                        rewrite[var] = expr.text();
                    r["rewrite"] = std::move(rewrite);
                }
                rules.push_back(std::move(r));
            }
            n["rules"] = std::move(rules);
            norms.push_back(std::move(n));
        }
        doc["norms"] = std::move(norms);
    }

    return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) raise(ErrorCode::io_error, "cannot open '" + path + "' for writing");
    out << scenario_to_json(scenario);
    if (!out) raise(ErrorCode::io_error, "cannot write '" + path + "'");
}

} // namespace valign
