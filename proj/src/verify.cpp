#include "qverify/verify.hpp"

#include <atomic>
#include <chrono>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace qverify {

using ojson = nlohmann::ordered_json;

bool VerificationReport::passed() const
{
    for (const auto& t : trials)
        if (t.status != "pass")
            return false;
    return true;
}

bool VerificationReport::has_mismatch() const
{
    for (const auto& t : trials)
        if (t.status == "fail")
            return true;
    return false;
}

bool VerificationReport::has_error() const
{
    for (const auto& t : trials)
        if (t.status == "error")
            return true;
    return false;
}

const std::vector<Rat>& sample_coefficients()
{
    static const std::vector<Rat> pool{Rat(1),     Rat(-1),    Rat(2),     Rat(-2),    Rat(3),     Rat(-3),
                                       Rat(1, 2),  Rat(-1, 2), Rat(2, 3),  Rat(-2, 3), Rat(3, 5),  Rat(-3, 5)};
    return pool;
}

SubstEnv sample_env(const Instance& inst, std::mt19937_64& rng)
{
    SubstEnv env;
    for (const auto& p : inst.params) {
        std::optional<Rat> fixed_c;
        std::set<Rat> banned;
        std::optional<long> lo, hi, eq;
        for (const auto& c : inst.constraints) {
            if (c.param != p || c.other)
                continue;
            if (c.on_c) {
                if (c.op == Constraint::Op::Eq)
                    fixed_c = c.value;
                else
                    banned.insert(c.value);
                continue;
            }
            switch (c.op) {
            case Constraint::Op::Ge:
                lo = lo ? std::max(*lo, c.k) : c.k;
                break;
            case Constraint::Op::Le:
                hi = hi ? std::min(*hi, c.k) : c.k;
                break;
            case Constraint::Op::Eq:
                eq = c.k;
                break;
            case Constraint::Op::Ne:
                break;
            }
        }
        ParamValue v;
        if (fixed_c) {
            v.c = *fixed_c;
        } else {
            std::vector<Rat> pool;
            for (const auto& c : sample_coefficients())
                if (!banned.count(c))
                    pool.push_back(c);
            if (pool.empty())
                fail(ErrorCode::ExhaustedSampler, "no admissible coefficient for " + p);
            v.c = pool[rng() % pool.size()];
        }
        long a = lo.value_or(0), b = a + 2;
        if (hi) {
            b = std::min(b, *hi);
            if (a > b)
                a = b - 2;
        }
        if (eq)
            a = b = *eq;
        v.e = a + static_cast<long>(rng() % static_cast<unsigned long>(b - a + 1));
        env.values[p] = v;
    }
    return env;
}

std::pair<SubstEnv, CompareResult> sample_and_compare(const Instance& inst, const Rat& N, std::mt19937_64& rng,
                                                      SubstEnv* last)
{
    for (int attempt = 0; attempt < 100; ++attempt) {
        SubstEnv env = sample_env(inst, rng);
        bool ok = true;
        for (const auto& c : inst.constraints)
            ok = ok && c.holds(env);
        if (!ok)
            continue;
        if (last)
            *last = env;
        try {
            return {env, compare_sides(inst.lhs, inst.rhs, env, N, inst.opts)};
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Pole)
                throw;
        }
    }
    if (last)
        *last = {};
    fail(ErrorCode::ExhaustedSampler, "no admissible env after 100 attempts");
}

std::mt19937_64 trial_rng(unsigned long seed, const std::string& id, std::size_t instance, int trial)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(instance), static_cast<std::uint32_t>(trial)};
    return std::mt19937_64(seq);
}

namespace {

TrialReport from_result(const std::string& label, const SubstEnv& env, const CompareResult& r)
{
    TrialReport t;
    t.instance = label;
    t.env = env;
    t.window_lo = r.window_lo;
    t.window_hi = r.window_hi;
    t.status = r.pass ? "pass" : "fail";
    t.mismatch = r.mismatch;
    return t;
}

TrialReport from_error(const std::string& label, const SubstEnv& env, const Error& e)
{
    TrialReport t;
    t.instance = label;
    t.env = env;
    t.status = "error";
    t.error = e.what();
    return t;
}

long ms_since(std::chrono::steady_clock::time_point t0)
{
    return static_cast<long>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count());
}

ojson rat_json(const Rat& r)
{
    if (r.is_integer() && r.num().fits_slong_p())
        return r.num().get_si();
    return r.str();
}

} // namespace

VerificationReport verify(const IdentityRecord& r, const SubstEnv& env, const Rat& N)
{
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.id = r.id;
    rep.cap = N;
    for (const auto& inst : r.instances()) {
        SubstEnv sub;
        for (const auto& p : inst.params) {
            auto it = env.values.find(p);
            if (it == env.values.end())
                fail(ErrorCode::UnknownParameter, r.id + ": no value for parameter " + p);
            sub.values[p] = it->second;
        }
        for (const auto& c : inst.constraints)
            if (!c.holds(sub))
                fail(ErrorCode::ConstraintViolation, r.id + ": " + c.str() + " fails at " + sub.str());
        try {
            rep.trials.push_back(from_result(inst.label, sub, compare_sides(inst.lhs, inst.rhs, sub, N, inst.opts)));
        } catch (const Error& e) {
            rep.trials.push_back(from_error(inst.label, sub, e));
        }
    }
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

VerificationReport verify_trials(const IdentityRecord& r, const Rat& N, int T, unsigned long seed)
{
    if (T <= 0)
        fail(ErrorCode::Precondition, "trial count must be at least 1");
    auto t0 = std::chrono::steady_clock::now();
    VerificationReport rep;
    rep.id = r.id;
    rep.cap = N;
    rep.seed = seed;
    auto insts = r.instances();
    for (std::size_t i = 0; i < insts.size(); ++i) {
        for (int t = 0; t < T; ++t) {
            auto rng = trial_rng(seed, r.id, i, t);
            SubstEnv last;
            try {
                auto [env, res] = sample_and_compare(insts[i], N, rng, &last);
                rep.trials.push_back(from_result(insts[i].label, env, res));
            } catch (const Error& e) {
                rep.trials.push_back(from_error(insts[i].label, last, e));
            }
        }
    }
    rep.elapsed_ms = ms_since(t0);
    return rep;
}

std::vector<VerificationReport> verify_many(const std::vector<const IdentityRecord*>& records, const Rat& N, int T,
                                            unsigned long seed, int jobs)
{
    std::vector<VerificationReport> out(records.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < records.size();)
            out[i] = verify_trials(*records[i], N, T, seed);
    };
    if (jobs <= 0)
        jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, records.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();
    return out;
}

namespace {

ojson to_json(const VerificationReport& r, bool reproducible)
{
    ojson j;
    j["id"] = r.id;
    j["cap"] = rat_json(r.cap);
    j["seed"] = r.seed;
    ojson trials = ojson::array();
    for (const auto& t : r.trials) {
        ojson tj;
        if (!t.instance.empty())
            tj["instance"] = t.instance;
        ojson env = ojson::object();
        for (const auto& [p, v] : t.env.values)
            env[p] = ojson{{"c", v.c.str()}, {"e", v.e}};
        tj["env"] = env;
        if (t.status == "error")
            tj["window"] = nullptr;
        else
            tj["window"] = ojson::array({rat_json(t.window_lo), rat_json(t.window_hi)});
        tj["status"] = t.status;
        if (t.mismatch)
            tj["mismatch"] = ojson{
                {"exponent", rat_json(t.mismatch->exponent)}, {"lhs", t.mismatch->lhs}, {"rhs", t.mismatch->rhs}};
        if (!t.error.empty())
            tj["error"] = t.error;
        trials.push_back(tj);
    }
    j["trials"] = trials;
    j["elapsed_ms"] = reproducible ? 0 : r.elapsed_ms;
    return j;
}

} // namespace

std::string report_json(const VerificationReport& r, bool reproducible)
{
    return to_json(r, reproducible).dump(2);
}

std::string reports_json(const std::vector<VerificationReport>& rs, bool reproducible)
{
    ojson a = ojson::array();
    for (const auto& r : rs)
        a.push_back(to_json(r, reproducible));
    return a.dump(2);
}

std::string report_text(const VerificationReport& r)
{
    std::ostringstream out;
    std::size_t pass = 0;
    for (const auto& t : r.trials)
        pass += t.status == "pass";
    out << r.id << ": " << (r.passed() ? "PASS" : r.has_mismatch() ? "FAIL" : "ERROR") << " (" << pass << "/"
        << r.trials.size() << " trials, cap " << r.cap.str() << ", " << r.elapsed_ms << " ms)\n";
    for (const auto& t : r.trials) {
        if (t.status == "pass")
            continue;
        out << "  [" << (t.instance.empty() ? "-" : t.instance) << "] " << t.env.str() << ": ";
        if (t.mismatch)
            out << "mismatch at q^" << t.mismatch->exponent.str() << ": lhs " << t.mismatch->lhs << ", rhs "
                << t.mismatch->rhs << "\n";
        else
            out << t.error << "\n";
    }
    return out.str();
}

} // namespace qverify
