#pragma once

#include <string>

#include "ellreg/errreal.hpp"

namespace ellreg {

// Certified three-way outcome of an inequality check. `slack` is the checked
// quantity (positive means the inequality holds); the verdict is Pass/Fail
// only when the sign is certain beyond the error radius.
struct Verdict {
    enum class State { Pass, Fail, Inconclusive, Skipped, Errored };
    State state = State::Skipped;
    ErrReal slack;
    std::string detail;

    static Verdict from_slack(const ErrReal& s) {
        Verdict v;
        v.slack = s;
        if (s.definitely_positive())
            v.state = State::Pass;
        else if (s.definitely_negative())
            v.state = State::Fail;
        else
            v.state = State::Inconclusive;
        return v;
    }
    static Verdict pass_vacuous(long prec, const std::string& why) {
        Verdict v;
        v.state = State::Pass;
        v.slack = ErrReal::zero(prec);
        v.detail = why;
        return v;
    }
    bool conclusive() const { return state == State::Pass || state == State::Fail; }
};

const char* verdict_name(Verdict::State s);

}  // namespace ellreg
