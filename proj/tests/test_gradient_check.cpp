// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gesturegen/nn/gradient_check.hpp"
#include "helpers.hpp"

using namespace gesturegen::nn;

namespace {

double check_net(std::vector<LayerSpec> specs, int time, int batch, uint64_t seed) {
  Network net(specs, seed);
  net.set_mode(Mode::Train);
  Rng rng(seed + 100);
  int in = net.input_dim();
  SeqBatch x(testutil::random_matrix(time * batch, in, rng), time, batch);

  // A gru with return_sequences=false collapses the time axis.
  bool collapsed = false;
  for (const LayerSpec& s : specs)
    if (s.kind == "gru" && !s.return_sequences) collapsed = true;
  int out_rows = collapsed ? batch : time * batch;

  Eigen::MatrixXd target = testutil::random_matrix(out_rows, net.output_dim(), rng);
  return gradient_check(net, x, target);
}

}  // namespace

TEST_CASE("every layer kind passes the finite-difference check") {
  CHECK(check_net({affine(3, 4)}, 2, 3, 1) < 1e-4);
  CHECK(check_net({affine(3, 4), relu(4)}, 2, 3, 2) < 1e-4);
  CHECK(check_net({affine(3, 4), batch_norm(4)}, 1, 6, 3) < 1e-4);
  CHECK(check_net({affine(3, 4), dropout(4, 0.3)}, 2, 3, 4) < 1e-4);
  CHECK(check_net({gru(3, 4, false, true)}, 4, 2, 5) < 1e-4);
  CHECK(check_net({gru(3, 4, true, true)}, 4, 2, 6) < 1e-4);
  CHECK(check_net({gru(3, 4, true, false)}, 4, 2, 7) < 1e-4);
  CHECK(check_net({linear_out(3, 2)}, 2, 2, 8) < 1e-4);
}

TEST_CASE("a purely linear layer is exact to 1e-7") {
  CHECK(check_net({linear_out(4, 3)}, 1, 4, 9) < 1e-7);
}

TEST_CASE("stacked mixed nets stay under the bound") {
  CHECK(check_net({affine(5, 6), relu(6), batch_norm(6), dropout(6, 0.2),
                   gru(6, 4, true, false), linear_out(8, 3)},
                  5, 3, 10) < 1e-4);
  CHECK(check_net({affine(4, 5), relu(5), gru(5, 3, false, true), linear_out(3, 6)}, 3, 4,
                  11) < 1e-4);
}
