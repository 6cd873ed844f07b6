#ifndef FDPROP_PROPAGATION_HPP
#define FDPROP_PROPAGATION_HPP

#include "fdprop/deduction.hpp"
#include "fdprop/rules.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fdprop {

enum class Strategy {
    Worklist,    ///< FIFO over rules whose inputs changed
    RoundRobin,  ///< cyclic scan, applying pending rules
    SeededRandom ///< uniform pick among pending rules, deterministic per seed
};

/// How an iteration chooses the next rule. A non-empty script is replayed
/// verbatim (no-ops included) and then extended with the worklist strategy;
/// otherwise the chosen strategy drives the whole run. All three strategies
/// are fair: a rule whose inputs shrank is eventually re-applied.
struct Run {
    std::vector<int> script; ///< rule indices, replayed in order
    Strategy strategy = Strategy::Worklist;
    std::uint64_t seed = 0;

    static Run scripted(std::vector<int> indices) { return {std::move(indices), Strategy::Worklist, 0}; }
    static Run worklist() { return {}; }
    static Run round_robin() { return {{}, Strategy::RoundRobin, 0}; }
    static Run random(std::uint64_t seed) { return {{}, Strategy::SeededRandom, seed}; }
};

/// One value removal: which value left which domain, at which step (1-based,
/// counting every applied rule), justified by which deduction-rule instance.
struct WithdrawalEvent {
    Value value = 0;
    VariableId variable;
    int step = 0;
    DeductionRule deduction; ///< head == (value, variable)

    const RuleId& rule() const { return deduction.rule; }
    int arc_index() const { return deduction.arc_index; }
};

/// The complete event log of one iteration. Immutable once built; the final
/// family is reconstructible by folding the applied sequence over the
/// initial domains.
class WithdrawalTrace {
public:
    WithdrawalTrace() = default;
    WithdrawalTrace(std::vector<WithdrawalEvent> events, std::vector<RuleId> applied,
                    DomainFamily final_family)
        : events_(std::move(events)), applied_(std::move(applied)),
          final_(std::move(final_family)) {
        for (std::size_t i = 0; i < events_.size(); ++i)
            index_[{events_[i].value, events_[i].variable.index}] = i;
    }

    const std::vector<WithdrawalEvent>& events() const { return events_; }
    const std::vector<RuleId>& applied() const { return applied_; }
    const DomainFamily& final_family() const { return final_; }

    const WithdrawalEvent* find(Value v, VariableId x) const {
        auto it = index_.find({v, x.index});
        return it == index_.end() ? nullptr : &events_[it->second];
    }

    std::optional<int> withdrawal_step(Value v, VariableId x) const {
        const WithdrawalEvent* e = find(v, x);
        return e ? std::optional<int>(e->step) : std::nullopt;
    }

    /// One event per line: step, rule label, var=value, support-function
    /// index (0-based), tab-separated.
    std::string to_text(const CspModel& model) const {
        std::ostringstream os;
        for (const WithdrawalEvent& e : events_)
            os << e.step << '\t' << e.rule().label << '\t' << model.name_of(e.variable)
               << '=' << e.value << '\t' << e.arc_index() << '\n';
        return os.str();
    }

private:
    std::vector<WithdrawalEvent> events_;
    std::map<std::pair<Value, int>, std::size_t> index_;
    std::vector<RuleId> applied_;
    DomainFamily final_;
};

enum class ClosureStatus { Closed, Failed };

struct ClosureResult {
    DomainFamily closure;
    WithdrawalTrace trace;
    ClosureStatus status = ClosureStatus::Closed;
    std::optional<VariableId> emptied; ///< Failed only: the domain that ran dry
};

namespace detail {

/// Change-driven scheduling state. A rule is pending when it has never run
/// or when one of its inputs shrank after its last application; the stale
/// queue entries left behind by re-pends are skipped via serial numbers.
class PendingSet {
public:
    explicit PendingSet(std::size_t n) : pending_(n, true), serial_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) fifo_.push_back({static_cast<int>(i), 0});
    }

    bool any() const { return count_ > 0; }
    bool is_pending(int r) const { return pending_[static_cast<std::size_t>(r)]; }

    void mark_applied(int r) {
        auto i = static_cast<std::size_t>(r);
        if (pending_[i]) {
            pending_[i] = false;
            --count_;
        }
    }

    void pend(int r) {
        auto i = static_cast<std::size_t>(r);
        if (!pending_[i]) {
            pending_[i] = true;
            ++count_;
            fifo_.push_back({r, ++serial_[i]});
        }
    }

    int pop_fifo() {
        while (!fifo_.empty()) {
            auto [r, s] = fifo_.front();
            fifo_.pop_front();
            auto i = static_cast<std::size_t>(r);
            if (pending_[i] && serial_[i] == s) return r;
        }
        return -1;
    }

    int next_round_robin(std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            cursor_ = (cursor_ + 1) % n;
            if (pending_[cursor_]) return static_cast<int>(cursor_);
        }
        return -1;
    }

    std::vector<int> pending_indices() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < pending_.size(); ++i)
            if (pending_[i]) out.push_back(static_cast<int>(i));
        return out;
    }

private:
    std::vector<bool> pending_;
    std::vector<std::uint64_t> serial_;
    std::deque<std::pair<int, std::uint64_t>> fifo_;
    std::size_t count_ = pending_.size();
    std::size_t cursor_ = static_cast<std::size_t>(-1);
};

} // namespace detail

/// Apply rules one at a time from the initial domains until a common
/// fixpoint (Closed) or, when stop_on_failure is set, until the first domain
/// empties (Failed). Every removal is recorded with its justification; steps
/// count every applied rule including no-ops.
inline ClosureResult iterate(const CspModel& model, const std::vector<ReductionRule>& rules,
                             const Run& run, bool stop_on_failure) {
    for (const ReductionRule& r : rules) {
        auto in_range = [&](VariableId x) { return x.index >= 0 && x.index < model.num_variables(); };
        if (!in_range(r.out_var))
            throw InputError("rule '" + r.id.label + "' writes a variable outside the model");
        for (VariableId x : r.in_vars)
            if (!in_range(x))
                throw InputError("rule '" + r.id.label + "' reads a variable outside the model");
    }
    for (int k : run.script)
        if (k < 0 || static_cast<std::size_t>(k) >= rules.size())
            throw InputError("scripted rule index " + std::to_string(k) + " out of range");

    DomainFamily d = model.initial_family();
    std::vector<WithdrawalEvent> events;
    std::map<std::pair<Value, int>, int> step_of; // (value, var index) -> step
    std::vector<RuleId> applied;
    detail::PendingSet pending(rules.size());
    std::optional<VariableId> emptied;

    const auto lookup = [&step_of](Value v, VariableId x) -> std::optional<int> {
        auto it = step_of.find({v, x.index});
        return it == step_of.end() ? std::nullopt : std::optional<int>(it->second);
    };

    // Applies one rule; returns false when stop_on_failure cuts the run.
    const auto apply_step = [&](int k) {
        const ReductionRule& rule = rules[static_cast<std::size_t>(k)];
        const int step = static_cast<int>(applied.size()) + 1;
        ReductionOutcome outcome = apply_rule(rule, d);
        applied.push_back(rule.id);
        pending.mark_applied(k);
        for (const RemovedValue& rm : outcome.removed) {
            WithdrawalEvent ev;
            ev.value = rm.value;
            ev.variable = rule.out_var;
            ev.step = step;
            ev.deduction = deduction_instance(rule, rm.value, rm.arc_index, lookup);
            step_of[{rm.value, rule.out_var.index}] = step;
            events.push_back(std::move(ev));
        }
        if (!outcome.removed.empty()) {
            d.at(rule.out_var) = outcome.new_domain;
            for (std::size_t j = 0; j < rules.size(); ++j)
                for (VariableId x : rules[j].in_vars)
                    if (x == rule.out_var) {
                        pending.pend(static_cast<int>(j));
                        break;
                    }
            if (outcome.new_domain.empty() && stop_on_failure) {
                emptied = rule.out_var;
                return false;
            }
        }
        return true;
    };

    bool cut = false;
    for (int k : run.script)
        if (!apply_step(k)) {
            cut = true;
            break;
        }

    std::mt19937_64 rng(run.seed);
    const Strategy strategy = run.script.empty() ? run.strategy : Strategy::Worklist;
    while (!cut && pending.any()) {
        int k = -1;
        switch (strategy) {
        case Strategy::Worklist:
            k = pending.pop_fifo();
            break;
        case Strategy::RoundRobin:
            k = pending.next_round_robin(rules.size());
            break;
        case Strategy::SeededRandom: {
            std::vector<int> candidates = pending.pending_indices();
            k = candidates[static_cast<std::size_t>(rng() % candidates.size())];
            break;
        }
        }
        if (k < 0) break;
        if (!apply_step(k)) cut = true;
    }

    ClosureResult result;
    result.closure = d;
    result.trace = WithdrawalTrace(std::move(events), std::move(applied), std::move(d));
    result.status = cut ? ClosureStatus::Failed : ClosureStatus::Closed;
    result.emptied = emptied;
    return result;
}

/// Fixpoint of the simultaneous operator: every domain is replaced by its
/// intersection with all rule outputs computed against the same family.
inline DomainFamily simultaneous_closure(const CspModel& model,
                                         const std::vector<ReductionRule>& rules) {
    DomainFamily d = model.initial_family();
    for (;;) {
        DomainFamily next = d;
        for (const ReductionRule& r : rules)
            next.at(r.out_var) = next.at(r.out_var).intersect(apply_rule(r, d).new_domain);
        if (next == d) return d;
        d = std::move(next);
    }
}

/// Is the family left unchanged by every rule's reduction operator?
inline bool is_common_fixpoint(const std::vector<ReductionRule>& rules,
                               const DomainFamily& d) {
    for (const ReductionRule& r : rules)
        if (!(reduce_operator(r, d) == d)) return false;
    return true;
}

} // namespace fdprop

#endif // FDPROP_PROPAGATION_HPP
