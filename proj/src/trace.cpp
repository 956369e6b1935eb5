#include <algorithm>
#include <string>

#include "cubelab/cube_averages.hpp"
#include "cubelab/cube_general.hpp"
#include "cubelab/parallel.hpp"

namespace cubelab {

namespace {

cplx evaluate(int k, const std::vector<Samples>& f, std::size_t n, Method method) {
  if (k == 2) {
    return method == Method::Naive ? cube3_naive(f[0], f[1], f[2], n) : cube3_fast(f[0], f[1], f[2], n);
  }
  if (k == 3) {
    const Seven seven{f[0], f[1], f[2], f[3], f[4], f[5], f[6]};
    return method == Method::Naive ? cube7_naive(seven, n) : cube7_fast(seven, n);
  }
  const CubeSpec spec{k, f};
  return method == Method::Naive ? cubek_naive(spec, n) : cubek_fast(spec, n);
}

}  // namespace

AverageTrace trace(int k, const std::vector<Samples>& functions,
                   const std::vector<std::size_t>& horizons, std::vector<std::string> inputs) {
  if (horizons.empty()) throw Error(ErrorCode::Parameter, "trace: no horizons");
  for (std::size_t j = 0; j < horizons.size(); ++j) {
    if (horizons[j] == 0 || (j > 0 && horizons[j] <= horizons[j - 1]))
      throw Error(ErrorCode::Parameter, "trace: horizons must be positive and strictly increasing");
  }
  const CubeSpec spec{k, functions};
  spec.validate(horizons.back());

  double bound = 1.0;
  for (const Samples f : functions) bound *= sup_norm(f);

  AverageTrace out;
  out.horizons = horizons;
  out.values.resize(horizons.size());
  out.method = Method::Fast;
  out.inputs = std::move(inputs);

  std::vector<std::string> failures(horizons.size());
  parallel_for(horizons.size(), [&](std::size_t j) {
    const std::size_t n = horizons[j];
    out.values[j] = evaluate(k, functions, n, Method::Fast);
    if (n <= kSelfCheckCrossover) {
      const cplx naive = evaluate(k, functions, n, Method::Naive);
      if (relative_error(out.values[j], naive, 1e-6 * bound + 1e-300) > 1e-8)
        failures[j] = "N=" + std::to_string(n);
    }
  });
  for (const auto& f : failures)
    if (!f.empty()) throw Error(ErrorCode::SelfCheck, "trace: fast and naive disagree at " + f);
  return out;
}

}  // namespace cubelab
