#ifndef GRADSEM_CHURCH_INTERP_HPP
#define GRADSEM_CHURCH_INTERP_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "gradsem/church/sexpr.hpp"
#include "gradsem/rng.hpp"

namespace gradsem::church {

struct Value;
struct Environment;
using EnvPtr = std::shared_ptr<Environment>;
using ValueList = std::vector<Value>;

// Runtime values. All numbers are double-precision reals.
struct Value {
    struct Sym {
        std::string name;
    };
    struct Procedure {
        std::vector<std::string> params;
        std::vector<SExpr> body;  // evaluated in order; last form is the result
        EnvPtr env;
    };
    struct Builtin {
        std::string tag;
    };
    // (mem f): caches f's result per printed argument tuple. The cache
    // lives as long as the value itself, which a fresh world-sample
    // recreates, giving per-world latent variables.
    struct Memoized {
        std::shared_ptr<Value> fn;
        std::shared_ptr<std::map<std::string, Value>> cache;
    };

    std::variant<double, bool, Sym, ValueList, Procedure, Builtin, Memoized> v;

    static Value real(double x) { return Value{x}; }
    static Value truth(bool b) { return Value{b}; }
    static Value sym(std::string name) { return Value{Sym{std::move(name)}}; }
    static Value list(ValueList items) { return Value{std::move(items)}; }

    bool is_real() const { return std::holds_alternative<double>(v); }
    bool is_truth() const { return std::holds_alternative<bool>(v); }
    bool is_sym() const { return std::holds_alternative<Sym>(v); }
    bool is_list() const { return std::holds_alternative<ValueList>(v); }

    double as_real() const { return std::get<double>(v); }
    bool as_truth() const { return std::get<bool>(v); }
    const std::string& sym_name() const { return std::get<Sym>(v).name; }
    const ValueList& list_items() const { return std::get<ValueList>(v); }
};

std::string to_string(const Value& value);
bool structurally_equal(const Value& a, const Value& b);

struct Environment {
    std::unordered_map<std::string, Value> bindings;
    EnvPtr parent;

    // Innermost binding wins; unbound identifiers are errors.
    const Value& lookup(const std::string& name) const;
    void define(const std::string& name, Value value) { bindings[name] = std::move(value); }
};

// Environment with the builtin operator set bound.
EnvPtr make_base_env();

// Evaluates one expression. Special forms: define, lambda, if, cond,
// quote, mem, and, or. Stochastic builtins draw from `rng`.
Value eval(const SExpr& expr, const EnvPtr& env, RandomStream& rng);

Value apply(const Value& fn, ValueList args, RandomStream& rng);

// A parsed world-model program plus the distribution constants the
// bundled assets are built around (kept for tooling defaults; behavior
// always comes from `source`).
struct WorldModel {
    std::string source;              // byte-exact program text
    std::vector<SExpr> definitions;  // parsed top-level forms
    double strength_mean = 50.0;
    double strength_sd = 20.0;
    std::map<std::string, double> league_means = {
        {"beginner", 30.0}, {"intermediate", 50.0}, {"professional", 70.0}};
};

WorldModel world_model_from_source(std::string source);
WorldModel load_world_model(const std::string& path);

// Evaluates all definitions in a fresh child of the base environment.
// Fresh call = fresh world = fresh memoization caches.
EnvPtr sample_world(const WorldModel& model, RandomStream& rng);

struct PosteriorSamples {
    ValueList values;
    std::uint64_t n_attempted = 0;
    std::uint64_t n_accepted = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string gaussian_method;

    double mean() const;    // requires real-valued samples
    double stddev() const;  // sample standard deviation
    double fraction_true() const;  // requires boolean samples
};

struct RejectionOptions {
    std::uint64_t attempt_cap = 10'000'000;
    double acceptance_floor = 1e-6;
    int workers = 1;
    // When set, accepted worlds are retained (testing hook for
    // re-checking conditions against recorded memoization caches).
    std::vector<EnvPtr>* keep_worlds = nullptr;
};

// Plain rejection sampling: per attempt, sample a fresh world, evaluate
// every condition, and keep the query value when all hold. Worker w
// draws from the stream seeded with derive_seed(seed, w); merged output
// is ordered by worker index then acceptance index. Throws StatsError
// ("condition too restrictive") if the attempt cap is exhausted with
// acceptance below the floor.
PosteriorSamples rejection_query(const WorldModel& model, const std::vector<SExpr>& conditions,
                                 const SExpr& query, std::uint64_t n_accepted, std::uint64_t seed,
                                 const RejectionOptions& options = {});

// Fraction of accepted worlds in which team_a out-pulls team_b, i.e. the
// posterior probability of (won-against '(team_a...) '(team_b...)).
double run_match_query(const WorldModel& model, const std::vector<SExpr>& conditions,
                       const std::vector<std::string>& team_a,
                       const std::vector<std::string>& team_b, std::uint64_t n_accepted,
                       std::uint64_t seed, const RejectionOptions& options = {});

}  // namespace gradsem::church

#endif  // GRADSEM_CHURCH_INTERP_HPP
