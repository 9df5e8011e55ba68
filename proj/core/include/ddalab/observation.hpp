#pragma once

#include <functional>
#include <string>
#include <utility>

namespace ddalab {

/// A finite-rank orthogonal projection P together with its complement
/// Q = I - P.
///
/// `merge(model, observed)` returns Q model + P observed. Concrete operators
/// implement it as a per-coefficient selection so that the observed part of
/// the result is bitwise equal to P observed and the unobserved part is
/// bitwise equal to Q model.
template <class State>
class ObservationOp {
 public:
  using Map = std::function<State(const State&)>;
  using Merge = std::function<State(const State&, const State&)>;

  ObservationOp(std::string name, Map p, Map q, Merge merge)
      : name_(std::move(name)),
        p_(std::move(p)),
        q_(std::move(q)),
        merge_(std::move(merge)) {}

  const std::string& name() const { return name_; }
  State P(const State& u) const { return p_(u); }
  State Q(const State& u) const { return q_(u); }
  State merge(const State& model, const State& observed) const {
    return merge_(model, observed);
  }

 private:
  std::string name_;
  Map p_;
  Map q_;
  Merge merge_;
};

/// P = I: the whole state is observed.
template <class State>
ObservationOp<State> full_observation(State zero) {
  return ObservationOp<State>(
      "identity", [](const State& u) { return u; },
      [zero](const State&) { return zero; },
      [](const State&, const State& observed) { return observed; });
}

/// P = 0: nothing is observed and the model runs free.
template <class State>
ObservationOp<State> no_observation(State zero) {
  return ObservationOp<State>(
      "zero", [zero](const State&) { return zero; },
      [](const State& u) { return u; },
      [](const State& model, const State&) { return model; });
}

}  // namespace ddalab
