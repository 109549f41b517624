#include "gradsem/church/interp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "gradsem/errors.hpp"

namespace gradsem::church {

std::string to_string(const Value& value) {
    if (value.is_real()) return format_real(value.as_real());
    if (value.is_truth()) return value.as_truth() ? "#t" : "#f";
    if (value.is_sym()) return value.sym_name();
    if (value.is_list()) {
        std::string out = "(";
        bool first = true;
        for (const Value& item : value.list_items()) {
            if (!first) out += ' ';
            first = false;
            out += to_string(item);
        }
        return out + ")";
    }
    if (std::holds_alternative<Value::Procedure>(value.v)) return "#<procedure>";
    if (std::holds_alternative<Value::Builtin>(value.v))
        return "#<builtin " + std::get<Value::Builtin>(value.v).tag + ">";
    return "#<memoized>";
}

bool structurally_equal(const Value& a, const Value& b) {
    if (a.v.index() != b.v.index()) return false;
    if (a.is_real()) return a.as_real() == b.as_real();
    if (a.is_truth()) return a.as_truth() == b.as_truth();
    if (a.is_sym()) return a.sym_name() == b.sym_name();
    if (a.is_list()) {
        const ValueList& xs = a.list_items();
        const ValueList& ys = b.list_items();
        if (xs.size() != ys.size()) return false;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!structurally_equal(xs[i], ys[i])) return false;
        }
        return true;
    }
    return false;  // procedures and builtins never compare equal
}

const Value& Environment::lookup(const std::string& name) const {
    for (const Environment* env = this; env != nullptr; env = env->parent.get()) {
        auto it = env->bindings.find(name);
        if (it != env->bindings.end()) return it->second;
    }
    throw EvalError("unbound identifier '" + name + "'");
}

namespace {

// Scheme truthiness: everything except #f is true.
bool is_truthy(const Value& v) { return !(v.is_truth() && !v.as_truth()); }

double require_real(const Value& v, const std::string& form) {
    if (!v.is_real()) throw EvalError("expected a number in " + form + ", got " + to_string(v));
    return v.as_real();
}

const ValueList& require_list(const Value& v, const std::string& form) {
    if (!v.is_list()) throw EvalError("expected a list in " + form + ", got " + to_string(v));
    return v.list_items();
}

void require_arity(const ValueList& args, std::size_t n, const std::string& form) {
    if (args.size() != n)
        throw EvalError(form + " expects " + std::to_string(n) + " argument(s), got " +
                        std::to_string(args.size()));
}

Value quote_to_value(const SExpr& e) {
    if (e.is_number()) return Value::real(e.as_number());
    if (e.is_boolean()) return Value::truth(e.as_boolean());
    if (e.is_symbol()) return Value::sym(e.symbol_name());
    if (e.is_quoted())
        return Value::list({Value::sym("quote"), quote_to_value(e.quoted_inner())});
    ValueList items;
    items.reserve(e.items().size());
    for (const SExpr& item : e.items()) items.push_back(quote_to_value(item));
    return Value::list(std::move(items));
}

std::string memo_key(const ValueList& args) {
    std::string key;
    for (const Value& arg : args) {
        key += to_string(arg);
        key += '\x1f';
    }
    return key;
}

Value apply_builtin(const std::string& tag, ValueList& args, RandomStream& rng) {
    if (tag == "+") {
        double acc = 0.0;
        for (const Value& a : args) acc += require_real(a, "(+)");
        return Value::real(acc);
    }
    if (tag == "-") {
        if (args.empty()) throw EvalError("(-) expects at least 1 argument");
        double acc = require_real(args[0], "(-)");
        if (args.size() == 1) return Value::real(-acc);
        for (std::size_t i = 1; i < args.size(); ++i) acc -= require_real(args[i], "(-)");
        return Value::real(acc);
    }
    if (tag == "*") {
        double acc = 1.0;
        for (const Value& a : args) acc *= require_real(a, "(*)");
        return Value::real(acc);
    }
    if (tag == "/") {
        if (args.empty()) throw EvalError("(/) expects at least 1 argument");
        double acc = require_real(args[0], "(/)");
        if (args.size() == 1) {
            if (acc == 0.0) throw EvalError("division by zero in (/)");
            return Value::real(1.0 / acc);
        }
        for (std::size_t i = 1; i < args.size(); ++i) {
            const double d = require_real(args[i], "(/)");
            if (d == 0.0) throw EvalError("division by zero in (/)");
            acc /= d;
        }
        return Value::real(acc);
    }
    if (tag == ">" || tag == "<" || tag == ">=" || tag == "<=") {
        require_arity(args, 2, "(" + tag + ")");
        const double a = require_real(args[0], "(" + tag + ")");
        const double b = require_real(args[1], "(" + tag + ")");
        if (tag == ">") return Value::truth(a > b);
        if (tag == "<") return Value::truth(a < b);
        if (tag == ">=") return Value::truth(a >= b);
        return Value::truth(a <= b);
    }
    if (tag == "equal?") {
        require_arity(args, 2, "(equal?)");
        return Value::truth(structurally_equal(args[0], args[1]));
    }
    if (tag == "not") {
        require_arity(args, 1, "(not)");
        return Value::truth(!is_truthy(args[0]));
    }
    if (tag == "list") return Value::list(std::move(args));
    if (tag == "length") {
        require_arity(args, 1, "(length)");
        return Value::real(static_cast<double>(require_list(args[0], "(length)").size()));
    }
    if (tag == "sum") {
        require_arity(args, 1, "(sum)");
        double acc = 0.0;
        for (const Value& item : require_list(args[0], "(sum)")) acc += require_real(item, "(sum)");
        return Value::real(acc);
    }
    if (tag == "map") {
        require_arity(args, 2, "(map)");
        const ValueList& items = require_list(args[1], "(map)");
        ValueList out;
        out.reserve(items.size());
        for (const Value& item : items) out.push_back(apply(args[0], {item}, rng));
        return Value::list(std::move(out));
    }
    if (tag == "member?") {
        require_arity(args, 2, "(member?)");
        for (const Value& item : require_list(args[1], "(member?)")) {
            if (structurally_equal(args[0], item)) return Value::truth(true);
        }
        return Value::truth(false);
    }
    if (tag == "flip") {
        if (args.size() > 1) throw EvalError("(flip) expects 0 or 1 arguments");
        const double p = args.empty() ? 0.5 : require_real(args[0], "(flip)");
        if (p < 0.0 || p > 1.0) throw EvalError("(flip) weight must lie in [0,1]");
        return Value::truth(rng.flip(p));
    }
    if (tag == "gaussian") {
        require_arity(args, 2, "(gaussian)");
        const double mu = require_real(args[0], "(gaussian)");
        const double sd = require_real(args[1], "(gaussian)");
        if (!(sd >= 0.0)) throw EvalError("(gaussian) requires a nonnegative standard deviation");
        const double draw = rng.gaussian(mu, sd);
        if (!std::isfinite(draw)) throw EvalError("(gaussian) produced a non-finite value");
        return Value::real(draw);
    }
    if (tag == "uniform") {
        require_arity(args, 2, "(uniform)");
        const double lo = require_real(args[0], "(uniform)");
        const double hi = require_real(args[1], "(uniform)");
        return Value::real(rng.uniform(lo, hi));
    }
    throw EvalError("unknown builtin '" + tag + "'");
}

Value eval_body(const std::vector<SExpr>& body, const EnvPtr& env, RandomStream& rng) {
    Value result = Value::truth(false);
    for (const SExpr& form : body) result = eval(form, env, rng);
    return result;
}

}  // namespace

Value apply(const Value& fn, ValueList args, RandomStream& rng) {
    if (std::holds_alternative<Value::Builtin>(fn.v))
        return apply_builtin(std::get<Value::Builtin>(fn.v).tag, args, rng);
    if (std::holds_alternative<Value::Procedure>(fn.v)) {
        const auto& proc = std::get<Value::Procedure>(fn.v);
        if (proc.params.size() != args.size())
            throw EvalError("procedure expects " + std::to_string(proc.params.size()) +
                            " argument(s), got " + std::to_string(args.size()));
        auto local = std::make_shared<Environment>();
        local->parent = proc.env;
        for (std::size_t i = 0; i < args.size(); ++i)
            local->define(proc.params[i], std::move(args[i]));
        return eval_body(proc.body, local, rng);
    }
    if (std::holds_alternative<Value::Memoized>(fn.v)) {
        const auto& memo = std::get<Value::Memoized>(fn.v);
        const std::string key = memo_key(args);
        auto it = memo.cache->find(key);
        if (it != memo.cache->end()) return it->second;
        Value result = apply(*memo.fn, std::move(args), rng);
        memo.cache->emplace(key, result);
        return result;
    }
    throw EvalError("cannot apply non-procedure " + to_string(fn));
}

Value eval(const SExpr& expr, const EnvPtr& env, RandomStream& rng) {
    if (expr.is_number()) return Value::real(expr.as_number());
    if (expr.is_boolean()) return Value::truth(expr.as_boolean());
    if (expr.is_symbol()) return env->lookup(expr.symbol_name());
    if (expr.is_quoted()) return quote_to_value(expr.quoted_inner());

    const SExpr::List& forms = expr.items();
    if (forms.empty()) throw EvalError("cannot evaluate the empty list ()");

    if (forms[0].is_symbol()) {
        const std::string& head = forms[0].symbol_name();

        if (head == "define") {
            if (forms.size() < 3) throw EvalError("malformed define: " + to_string(expr));
            if (forms[1].is_symbol()) {
                if (forms.size() != 3) throw EvalError("malformed define: " + to_string(expr));
                env->define(forms[1].symbol_name(), eval(forms[2], env, rng));
                return Value::truth(true);
            }
            if (!forms[1].is_list() || forms[1].items().empty() ||
                !forms[1].items().front().is_symbol())
                throw EvalError("malformed define: " + to_string(expr));
            // (define (name params...) body...)
            const SExpr::List& sig = forms[1].items();
            Value::Procedure proc;
            for (std::size_t i = 1; i < sig.size(); ++i) {
                if (!sig[i].is_symbol())
                    throw EvalError("parameter names must be symbols in " + to_string(expr));
                proc.params.push_back(sig[i].symbol_name());
            }
            proc.body.assign(forms.begin() + 2, forms.end());
            proc.env = env;
            env->define(sig.front().symbol_name(), Value{std::move(proc)});
            return Value::truth(true);
        }
        if (head == "lambda") {
            if (forms.size() < 3 || !forms[1].is_list())
                throw EvalError("malformed lambda: " + to_string(expr));
            Value::Procedure proc;
            for (const SExpr& p : forms[1].items()) {
                if (!p.is_symbol())
                    throw EvalError("parameter names must be symbols in " + to_string(expr));
                proc.params.push_back(p.symbol_name());
            }
            proc.body.assign(forms.begin() + 2, forms.end());
            proc.env = env;
            return Value{std::move(proc)};
        }
        if (head == "if") {
            if (forms.size() != 4) throw EvalError("malformed if: " + to_string(expr));
            return is_truthy(eval(forms[1], env, rng)) ? eval(forms[2], env, rng)
                                                       : eval(forms[3], env, rng);
        }
        if (head == "cond") {
            for (std::size_t i = 1; i < forms.size(); ++i) {
                if (!forms[i].is_list() || forms[i].items().size() < 2)
                    throw EvalError("malformed cond clause in " + to_string(expr));
                const SExpr::List& clause = forms[i].items();
                const bool is_else = clause[0].is_symbol() && clause[0].symbol_name() == "else";
                if (is_else && i + 1 != forms.size())
                    throw EvalError("cond: else clause must come last in " + to_string(expr));
                if (is_else || is_truthy(eval(clause[0], env, rng))) {
                    std::vector<SExpr> body(clause.begin() + 1, clause.end());
                    return eval_body(body, env, rng);
                }
            }
            throw EvalError("cond: no clause matched in " + to_string(expr));
        }
        if (head == "quote") {
            if (forms.size() != 2) throw EvalError("malformed quote: " + to_string(expr));
            return quote_to_value(forms[1]);
        }
        if (head == "mem") {
            if (forms.size() != 2) throw EvalError("malformed mem: " + to_string(expr));
            Value fn = eval(forms[1], env, rng);
            if (!std::holds_alternative<Value::Procedure>(fn.v) &&
                !std::holds_alternative<Value::Builtin>(fn.v))
                throw EvalError("mem expects a procedure in " + to_string(expr));
            Value::Memoized memo;
            memo.fn = std::make_shared<Value>(std::move(fn));
            memo.cache = std::make_shared<std::map<std::string, Value>>();
            return Value{std::move(memo)};
        }
        if (head == "and") {
            Value result = Value::truth(true);
            for (std::size_t i = 1; i < forms.size(); ++i) {
                result = eval(forms[i], env, rng);
                if (!is_truthy(result)) return result;
            }
            return result;
        }
        if (head == "or") {
            for (std::size_t i = 1; i < forms.size(); ++i) {
                Value result = eval(forms[i], env, rng);
                if (is_truthy(result)) return result;
            }
            return Value::truth(false);
        }
    }

    Value fn = eval(forms[0], env, rng);
    ValueList args;
    args.reserve(forms.size() - 1);
    for (std::size_t i = 1; i < forms.size(); ++i) args.push_back(eval(forms[i], env, rng));
    return apply(fn, std::move(args), rng);
}

EnvPtr make_base_env() {
    auto env = std::make_shared<Environment>();
    for (const char* tag : {"+", "-", "*", "/", ">", "<", ">=", "<=", "equal?", "not", "list",
                            "length", "sum", "map", "member?", "flip", "gaussian", "uniform"})
        env->define(tag, Value{Value::Builtin{tag}});
    env->define("true", Value::truth(true));
    env->define("false", Value::truth(false));
    return env;
}

WorldModel world_model_from_source(std::string source) {
    WorldModel model;
    model.definitions = parse_program(source);
    model.source = std::move(source);
    return model;
}

WorldModel load_world_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open world model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return world_model_from_source(buf.str());
}

EnvPtr sample_world(const WorldModel& model, RandomStream& rng) {
    auto world = std::make_shared<Environment>();
    world->parent = make_base_env();
    for (const SExpr& def : model.definitions) eval(def, world, rng);
    return world;
}

double PosteriorSamples::mean() const {
    if (values.empty()) throw StatsError("no samples to summarize");
    double acc = 0.0;
    for (const Value& v : values) {
        if (!v.is_real()) throw StatsError("samples are not real-valued");
        acc += v.as_real();
    }
    return acc / static_cast<double>(values.size());
}

double PosteriorSamples::stddev() const {
    const double m = mean();
    double acc = 0.0;
    for (const Value& v : values) {
        const double d = v.as_real() - m;
        acc += d * d;
    }
    if (values.size() < 2) return 0.0;
    return std::sqrt(acc / static_cast<double>(values.size() - 1));
}

double PosteriorSamples::fraction_true() const {
    if (values.empty()) throw StatsError("no samples to summarize");
    std::size_t count = 0;
    for (const Value& v : values) {
        if (!v.is_truth()) throw StatsError("samples are not boolean");
        if (v.as_truth()) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(values.size());
}

namespace {

struct WorkerResult {
    ValueList values;
    std::vector<EnvPtr> worlds;
    std::uint64_t attempted = 0;
};

WorkerResult run_worker(const WorldModel& model, const std::vector<SExpr>& conditions,
                        const SExpr& query, std::uint64_t target, std::uint64_t attempt_cap,
                        std::uint64_t stream_seed, bool keep_worlds) {
    WorkerResult out;
    RandomStream rng(stream_seed);
    while (out.values.size() < target && out.attempted < attempt_cap) {
        ++out.attempted;
        EnvPtr world = sample_world(model, rng);
        bool accepted = true;
        for (const SExpr& cond : conditions) {
            const Value v = eval(cond, world, rng);
            if (!v.is_truth())
                throw EvalError("condition must evaluate to a boolean: " + to_string(cond));
            if (!v.as_truth()) {
                accepted = false;
                break;
            }
        }
        if (!accepted) continue;
        out.values.push_back(eval(query, world, rng));
        if (keep_worlds) out.worlds.push_back(world);
    }
    return out;
}

}  // namespace

PosteriorSamples rejection_query(const WorldModel& model, const std::vector<SExpr>& conditions,
                                 const SExpr& query, std::uint64_t n_accepted, std::uint64_t seed,
                                 const RejectionOptions& options) {
    if (n_accepted < 1) throw ValidationError("rejection_query requires n_accepted >= 1");
    const int workers = std::max(1, options.workers);
    const auto w = static_cast<std::uint64_t>(workers);

    std::vector<WorkerResult> results(static_cast<std::size_t>(workers));
    std::exception_ptr failure;

    auto run = [&](int index) {
        const auto i = static_cast<std::uint64_t>(index);
        const std::uint64_t target = n_accepted / w + (i < n_accepted % w ? 1 : 0);
        const std::uint64_t cap = options.attempt_cap / w + (i < options.attempt_cap % w ? 1 : 0);
        try {
            results[static_cast<std::size_t>(index)] =
                run_worker(model, conditions, query, target, cap, derive_seed(seed, i),
                           options.keep_worlds != nullptr);
        } catch (...) {
            if (!failure) failure = std::current_exception();
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(run, i);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    PosteriorSamples out;
    out.seed = seed;
    out.workers = workers;
    out.gaussian_method = RandomStream::gaussian_method();
    for (WorkerResult& r : results) {
        out.n_attempted += r.attempted;
        std::move(r.values.begin(), r.values.end(), std::back_inserter(out.values));
        if (options.keep_worlds != nullptr)
            std::move(r.worlds.begin(), r.worlds.end(), std::back_inserter(*options.keep_worlds));
    }
    out.n_accepted = out.values.size();

    if (out.n_accepted < n_accepted) {
        const double rate = out.n_attempted == 0
                                ? 0.0
                                : static_cast<double>(out.n_accepted) /
                                      static_cast<double>(out.n_attempted);
        if (rate < options.acceptance_floor)
            throw StatsError("condition too restrictive: acceptance rate " +
                             std::to_string(rate) + " after " + std::to_string(out.n_attempted) +
                             " attempts");
    }
    return out;
}

double run_match_query(const WorldModel& model, const std::vector<SExpr>& conditions,
                       const std::vector<std::string>& team_a,
                       const std::vector<std::string>& team_b, std::uint64_t n_accepted,
                       std::uint64_t seed, const RejectionOptions& options) {
    auto team_expr = [](const std::vector<std::string>& team) {
        SExpr::List members;
        members.reserve(team.size());
        for (const std::string& name : team) members.push_back(SExpr::symbol(name));
        return SExpr::quoted(SExpr::list(std::move(members)));
    };
    const SExpr query = SExpr::list(
        {SExpr::symbol("won-against"), team_expr(team_a), team_expr(team_b)});
    return rejection_query(model, conditions, query, n_accepted, seed, options).fraction_true();
}

}  // namespace gradsem::church
