#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <string>

#include "netrobust/cli.hpp"
#include "netrobust/errors.hpp"
#include "netrobust/parallel.hpp"

namespace netrobust::cli {

namespace {

MeasureId approximation_of(MeasureId id) {
  if (!measure_info(id).exact) return id;
  for (const auto& info : all_measures()) {
    if (info.exact_counterpart == id) return info.id;
  }
  throw ParameterError(std::string(measure_info(id).name) + " has no approximate variant");
}

}  // namespace

std::vector<ApproxErrorRow> approx_error_harness(const Graph& g, MeasureId id,
                                                 std::span<const std::size_t> k_grid,
                                                 std::size_t runs, std::uint64_t seed,
                                                 std::size_t jobs) {
  if (runs == 0) throw ParameterError("runs must be positive");
  if (k_grid.empty()) throw ParameterError("k grid is empty");
  for (std::size_t k : k_grid) {
    if (k < 1 || k > g.node_count()) {
      throw ParameterError("k = " + std::to_string(k) + " outside [1, n]");
    }
  }
  const MeasureId approx = approximation_of(id);
  const MeasureId exact_id = *measure_info(approx).exact_counterpart;
  const double exact = evaluate(g, exact_id).value;

  std::vector<double> errors(k_grid.size() * runs);
  parallel_for(errors.size(), jobs, [&](std::size_t i) {
    MeasureOptions options;
    options.k = k_grid[i / runs];
    options.seed = seed + i % runs;
    errors[i] = std::abs(evaluate(g, approx, options).value - exact);
  });

  std::vector<ApproxErrorRow> rows;
  for (std::size_t j = 0; j < k_grid.size(); ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += errors[j * runs + r];
    rows.push_back({k_grid[j], sum / static_cast<double>(runs)});
  }
  return rows;
}

namespace {

struct ChildOutcome {
  enum class Kind { ok, timeout, error } kind = Kind::error;
  double seconds = 0.0;
  std::string message;
};

// Evaluates in a forked child so a runaway measure can be killed.
ChildOutcome timed_evaluation(const Graph& g, MeasureId id, double budget_seconds) {
  int fds[2];
  if (pipe(fds) != 0) return {ChildOutcome::Kind::error, 0.0, "pipe failed"};
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return {ChildOutcome::Kind::error, 0.0, "fork failed"};
  }
  if (pid == 0) {
    close(fds[0]);
    std::string reply;
    try {
      const auto start = std::chrono::steady_clock::now();
      (void)evaluate(g, id);
      const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
      reply = "ok " + format_double(took.count());
    } catch (const std::exception& e) {
      reply = std::string("error ") + e.what();
    }
    const char* p = reply.data();
    std::size_t left = reply.size();
    while (left > 0) {
      const auto w = write(fds[1], p, left);
      if (w <= 0) break;
      p += w;
      left -= static_cast<std::size_t>(w);
    }
    _exit(0);
  }

  close(fds[1]);
  std::string reply;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(budget_seconds);
  bool timed_out = false;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int ready = poll(&pfd, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) {
      timed_out = true;
      break;
    }
    char buf[512];
    const auto got = read(fds[0], buf, sizeof buf);
    if (got <= 0) break;  // child closed the pipe
    reply.append(buf, static_cast<std::size_t>(got));
  }
  close(fds[0]);
  if (timed_out) kill(pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  if (timed_out) return {ChildOutcome::Kind::timeout, 0.0, {}};
  if (reply.rfind("ok ", 0) == 0) {
    return {ChildOutcome::Kind::ok, std::stod(reply.substr(3)), {}};
  }
  if (reply.rfind("error ", 0) == 0) return {ChildOutcome::Kind::error, 0.0, reply.substr(6)};
  return {ChildOutcome::Kind::error, 0.0, "child exited without a result"};
}

}  // namespace

std::vector<ScalabilityRow> scalability_harness(std::span<const MeasureId> ids,
                                                std::span<const std::size_t> sizes,
                                                double budget_seconds, std::size_t runs,
                                                std::uint64_t seed) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw ParameterError("sizes must be ascending");
  }
  if (!(budget_seconds > 0.0)) throw ParameterError("time budget must be positive");
  if (runs == 0) throw ParameterError("runs must be positive");

  // Once a measure times out, larger sizes are reported as timeouts without
  // being run.
  std::vector<bool> exhausted(ids.size(), false);
  std::vector<ScalabilityRow> rows;
  for (std::size_t n : sizes) {
    GeneratorParams params;
    params.n = n;
    params.seed = seed;
    const Graph g = generate_clustered_scale_free(params);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      ScalabilityRow row;
      row.measure = std::string(measure_info(ids[i]).name);
      row.n = n;
      if (exhausted[i]) {
        row.status = "TIMEOUT";
        rows.push_back(std::move(row));
        continue;
      }
      double total = 0.0;
      row.status = "ok";
      for (std::size_t r = 0; r < runs; ++r) {
        auto outcome = timed_evaluation(g, ids[i], budget_seconds);
        if (outcome.kind == ChildOutcome::Kind::timeout) {
          row.status = "TIMEOUT";
          exhausted[i] = true;
          break;
        }
        if (outcome.kind == ChildOutcome::Kind::error) {
          row.status = "error: " + outcome.message;
          break;
        }
        total += outcome.seconds;
      }
      if (row.status == "ok") row.seconds = total / static_cast<double>(runs);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace netrobust::cli
