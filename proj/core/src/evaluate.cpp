#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "colcirc/circuit.hpp"
#include "colcirc/error.hpp"

namespace colcirc {

std::size_t default_thread_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COLCIRC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min<std::size_t>(static_cast<std::size_t>(v), 256);
  }
  return hw;
}

namespace {

// In-port source: a circuit input label, or (vertex index, out-port index).
struct Source {
  int vertex = -1;
  int port = -1;
  std::string label;
};

struct Plan {
  std::vector<std::string> ids;
  std::vector<const Operator*> ops;
  std::vector<std::vector<Source>> sources;   // per vertex, per in-port
  std::vector<std::vector<int>> dependents;   // distinct successor vertices
  std::vector<int> pending;                   // distinct predecessor count
};

Plan make_plan(const Circuit& c) {
  Plan plan;
  std::map<std::string, int> index;
  for (const auto& [id, op] : c.vertices()) {
    index[id] = static_cast<int>(plan.ids.size());
    plan.ids.push_back(id);
    plan.ops.push_back(op.get());
    plan.sources.emplace_back(op->signature().inputs.size());
  }
  std::size_t n = plan.ids.size();
  plan.dependents.resize(n);
  plan.pending.assign(n, 0);
  std::vector<std::set<int>> preds(n);
  for (const auto& e : c.edges()) {
    int from = index.at(e.from.vertex);
    int to = index.at(e.to.vertex);
    int in_slot = plan.ops[to]->signature().input_index(e.to.port);
    int out_slot = plan.ops[from]->signature().output_index(e.from.port);
    plan.sources[to][in_slot] = Source{from, out_slot, {}};
    preds[to].insert(from);
  }
  for (const auto& [label, port] : c.inputs()) {
    int v = index.at(port.vertex);
    int slot = plan.ops[v]->signature().input_index(port.port);
    plan.sources[v][slot] = Source{-1, -1, label};
  }
  for (std::size_t v = 0; v < n; ++v) {
    plan.pending[v] = static_cast<int>(preds[v].size());
    for (int p : preds[v]) plan.dependents[p].push_back(static_cast<int>(v));
  }
  return plan;
}

class Run {
 public:
  Run(const Plan& plan, const ColumnFamily& inputs) : plan_(plan), inputs_(inputs) {
    results_.resize(plan.ids.size());
  }

  std::vector<Column> gather_inputs(int v) const {
    std::vector<Column> args;
    for (const auto& src : plan_.sources[v]) {
      if (src.vertex < 0) {
        args.push_back(inputs_.at(src.label));
      } else {
        args.push_back(results_[src.vertex][src.port]);
      }
    }
    return args;
  }

  void execute(int v) {
    auto args = gather_inputs(v);
    try {
      results_[v] = plan_.ops[v]->evaluate(args);
    } catch (const OperatorFailure& f) {
      throw OperatorFailure(plan_.ids[v] + "/" + f.vertex(), f.inner_code(), f.what());
    } catch (const Error& e) {
      throw OperatorFailure(plan_.ids[v], e.code(), e.what());
    } catch (const std::exception& e) {
      throw OperatorFailure(plan_.ids[v], Errc::operator_failure, e.what());
    }
  }

  void run_sequential() {
    std::vector<int> pending = plan_.pending;
    std::deque<int> ready;
    for (std::size_t v = 0; v < pending.size(); ++v) {
      if (pending[v] == 0) ready.push_back(static_cast<int>(v));
    }
    while (!ready.empty()) {
      int v = ready.front();
      ready.pop_front();
      execute(v);
      for (int d : plan_.dependents[v]) {
        if (--pending[d] == 0) ready.push_back(d);
      }
    }
  }

  void run_concurrent(std::size_t threads) {
    std::vector<int> pending = plan_.pending;
    std::deque<int> ready;
    std::size_t remaining = pending.size();
    for (std::size_t v = 0; v < pending.size(); ++v) {
      if (pending[v] == 0) ready.push_back(static_cast<int>(v));
    }
    std::mutex mu;
    std::condition_variable cv;
    std::exception_ptr error;
    std::size_t error_vertex = pending.size();

    auto worker = [&] {
      std::unique_lock lock(mu);
      for (;;) {
        cv.wait(lock, [&] { return !ready.empty() || remaining == 0 || error; });
        if (remaining == 0 || error) return;
        int v = ready.front();
        ready.pop_front();
        lock.unlock();
        std::exception_ptr local;
        try {
          execute(v);
        } catch (...) {
          local = std::current_exception();
        }
        lock.lock();
        if (local) {
          // Report the failing vertex with the smallest id for stable messages.
          if (!error || static_cast<std::size_t>(v) < error_vertex) {
            error = local;
            error_vertex = static_cast<std::size_t>(v);
          }
          cv.notify_all();
          return;
        }
        --remaining;
        for (int d : plan_.dependents[v]) {
          if (--pending[d] == 0) ready.push_back(d);
        }
        cv.notify_all();
      }
    };

    std::vector<std::thread> pool;
    std::size_t count = std::min(threads, std::max<std::size_t>(1, pending.size()));
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  const std::vector<std::vector<Column>>& results() const { return results_; }

 private:
  const Plan& plan_;
  const ColumnFamily& inputs_;
  std::vector<std::vector<Column>> results_;
};

}  // namespace

EvalResult evaluate_circuit_full(const Circuit& c, const ColumnFamily& inputs,
                                 const EvalOptions& options) {
  if (!options.skip_validation) require_valid(c);
  for (const auto& [label, port] : c.inputs()) {
    auto it = inputs.find(label);
    require(it != inputs.end(), Errc::missing_input, "missing input column '" + label + "'");
    auto expected = c.port_type(port);
    if (it->second.type() != expected) {
      throw Error(Errc::type_mismatch, "input '" + label + "' has type " +
                                           it->second.type().to_string() + ", circuit expects " +
                                           expected.to_string());
    }
  }
  for (const auto& [label, col] : inputs) {
    require(c.inputs().count(label) != 0, Errc::invalid_argument,
            "unexpected input column '" + label + "'");
  }

  Plan plan = make_plan(c);
  Run run(plan, inputs);
  if (options.threads > 1 && plan.ids.size() > 1) {
    run.run_concurrent(options.threads);
  } else {
    run.run_sequential();
  }

  std::map<std::string, int> index;
  for (std::size_t v = 0; v < plan.ids.size(); ++v) index[plan.ids[v]] = static_cast<int>(v);

  EvalResult result;
  for (const auto& [label, port] : c.outputs()) {
    int v = index.at(port.vertex);
    int slot = plan.ops[v]->signature().output_index(port.port);
    result.outputs.emplace(label, run.results()[v][slot]);
  }
  if (options.trace) {
    for (std::size_t v = 0; v < plan.ids.size(); ++v) {
      const auto& sig = plan.ops[v]->signature();
      auto args = run.gather_inputs(static_cast<int>(v));
      for (std::size_t k = 0; k < sig.inputs.size(); ++k) {
        result.trace.emplace(plan.ids[v] + "." + sig.inputs[k].label, args[k]);
      }
      for (std::size_t k = 0; k < sig.outputs.size(); ++k) {
        result.trace.emplace(plan.ids[v] + "." + sig.outputs[k].label, run.results()[v][k]);
      }
    }
  }
  return result;
}

ColumnFamily evaluate_circuit(const Circuit& c, const ColumnFamily& inputs,
                              const EvalOptions& options) {
  EvalOptions opts = options;
  opts.trace = false;
  return evaluate_circuit_full(c, inputs, opts).outputs;
}

bool evaluate_decision_circuit(const Circuit& c, const ColumnFamily& inputs,
                               const EvalOptions& options) {
  require(c.outputs().size() == 1, Errc::non_scalar_output,
          "decision circuit must have exactly one output");
  auto out = evaluate_circuit(c, inputs, options);
  const Column& verdict = out.begin()->second;
  require(verdict.type().is_bit(), Errc::non_scalar_output, "decision output must be bit");
  require(verdict.size() == 1, Errc::non_scalar_output,
          "decision output has length " + std::to_string(verdict.size()));
  return verdict.bit(0);
}

}  // namespace colcirc
