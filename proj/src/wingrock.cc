/******************************************************************************
 * Copyright 2026 The DADS Toolkit Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#include "dads/wingrock.h"

#include <map>
#include <vector>

#include "dads/expression.h"

namespace dads {
namespace {

struct TableEntry {
  int power;  // of t
  int beta;   // of e^z
  double coeff;
};

// Sums of absolute coefficients of dV2/dx, k2 and dk2/dx Phi, grouped by
// total degree minus one and by power of e^z.
constexpr TableEntry kLevel3Table[] = {
    {0, -1, 45.0},
    {0, 0, 70350.5},
    {0, 1, 158681.0},
    {0, 2, 156403.0},
    {0, 3, 89377.0},
    {0, 4, 32890.5},
    {0, 5, 8112.75},
    {0, 6, 1343.0},
    {0, 7, 143.75},
    {0, 8, 9.0},
    {0, 9, 0.25},
    {1, -1, 15.0},
    {1, 0, 23442.0},
    {1, 1, 48984.0},
    {1, 2, 43970.0},
    {1, 3, 22464.0},
    {1, 4, 7219.5},
    {1, 5, 1501.0},
    {1, 6, 197.5},
    {1, 7, 15.0},
    {1, 8, 0.5},
    {2, -2, 150.0},
    {2, -1, 428.75},
    {2, 0, 611635.75},
    {2, 1, 1664100.75},
    {2, 2, 1890740.5},
    {2, 3, 1227718.25},
    {2, 4, 511609.375},
    {2, 5, 143604.875},
    {2, 6, 27478.375},
    {2, 7, 3521.375},
    {2, 8, 286.375},
    {2, 9, 13.125},
    {2, 10, 0.25},
    {3, -2, 50.0},
    {3, -1, 240.0},
    {3, 0, 340238.5},
    {3, 1, 876287.0},
    {3, 2, 927029.5},
    {3, 3, 553366.0},
    {3, 4, 209077.5},
    {3, 5, 52243.5},
    {3, 6, 8655.5},
    {3, 7, 916.0},
    {3, 8, 56.0},
    {3, 9, 1.5},
    {4, -2, 12.5},
    {4, -1, 132.5},
    {4, 0, 1015322.125},
    {4, 1, 3461137.5},
    {4, 2, 4917878.5},
    {4, 3, 3880626.6875},
    {4, 4, 1913392.0},
    {4, 5, 622556.3125},
    {4, 6, 136099.75},
    {4, 7, 19757.6875},
    {4, 8, 1817.5},
    {4, 9, 95.0625},
    {4, 10, 2.125},
    {5, -1, 60.0},
    {5, 0, 608625.25},
    {5, 1, 1973219.5},
    {5, 2, 2638293.625},
    {5, 3, 1935308.0},
    {5, 4, 873767.625},
    {5, 5, 255065.25},
    {5, 6, 48525.125},
    {5, 7, 5823.75},
    {5, 8, 400.375},
    {5, 9, 12.0},
    {6, -1, 11.25},
    {6, 0, 787350.9375},
    {6, 1, 3275147.6875},
    {6, 2, 5713164.59375},
    {6, 3, 5496847.78125},
    {6, 4, 3244794.40625},
    {6, 5, 1238756.21875},
    {6, 6, 312041.90625},
    {6, 7, 51430.21875},
    {6, 8, 5313.90625},
    {6, 9, 310.34375},
    {6, 10, 7.75},
    {7, -1, 3.75},
    {7, 0, 478439.75},
    {7, 1, 1904499.625},
    {7, 2, 3149487.75},
    {7, 3, 2838460.5},
    {7, 4, 1544760.5},
    {7, 5, 531918.875},
    {7, 6, 116958.75},
    {7, 7, 15934.0},
    {7, 8, 1224.5},
    {7, 9, 40.5},
    {8, -1, 0.3125},
    {8, 0, 348108.375},
    {8, 1, 1719496.34375},
    {8, 2, 3598130.8125},
    {8, 3, 4173255.546875},
    {8, 4, 2959027.375},
    {8, 5, 1339585.796875},
    {8, 6, 393669.8125},
    {8, 7, 74500.453125},
    {8, 8, 8718.875},
    {8, 9, 570.796875},
    {8, 10, 15.875},
    {9, 0, 207915.5},
    {9, 1, 987210.875},
    {9, 2, 1969022.34375},
    {9, 3, 2152455.6875},
    {9, 4, 1415925.65625},
    {9, 5, 581291.875},
    {9, 6, 149665.65625},
    {9, 7, 23440.5625},
    {9, 8, 2036.09375},
    {9, 9, 75.0},
    {10, 0, 93650.3125},
    {10, 1, 537747.09375},
    {10, 2, 1322895.9609375},
    {10, 3, 1821520.4296875},
    {10, 4, 1542969.8359375},
    {10, 5, 833974.5234375},
    {10, 6, 289963.3203125},
    {10, 7, 64056.6953125},
    {10, 8, 8628.7890625},
    {10, 9, 642.0703125},
    {10, 10, 20.09375},
    {11, 0, 53293.6875},
    {11, 1, 295074.9375},
    {11, 2, 694691.03125},
    {11, 3, 906112.5},
    {11, 4, 716325.59375},
    {11, 5, 353307.875},
    {11, 6, 108213.09375},
    {11, 7, 19857.875},
    {11, 8, 1987.84375},
    {11, 9, 83.0625},
    {12, 0, 15549.875},
    {12, 1, 102016.453125},
    {12, 2, 290060.65625},
    {12, 3, 467065.49609375},
    {12, 4, 468141.5078125},
    {12, 5, 302180.23828125},
    {12, 6, 125882.40625},
    {12, 7, 33125.66015625},
    {12, 8, 5253.6953125},
    {12, 9, 454.08984375},
    {12, 10, 16.296875},
    {13, 0, 8100.34375},
    {13, 1, 51329.15625},
    {13, 2, 140009.2578125},
    {13, 3, 214336.453125},
    {13, 4, 201500.4296875},
    {13, 5, 119482.0625},
    {13, 6, 44202.2421875},
    {13, 7, 9738.203125},
    {13, 8, 1154.8515625},
    {13, 9, 56.25},
    {14, 0, 1579.0234375},
    {14, 1, 11673.6875},
    {14, 2, 37814.080078125},
    {14, 3, 70223.669921875},
    {14, 4, 82307.603515625},
    {14, 5, 63053.787109375},
    {14, 6, 31607.271484375},
    {14, 7, 10094.900390625},
    {14, 8, 1937.849609375},
    {14, 9, 200.455078125},
    {14, 10, 8.484375},
    {15, 0, 709.109375},
    {15, 1, 5065.1875},
    {15, 2, 15754.71875},
    {15, 3, 27871.0625},
    {15, 4, 30748.09375},
    {15, 5, 21764.96875},
    {15, 6, 9779.71875},
    {15, 7, 2650.5},
    {15, 8, 385.984375},
    {15, 9, 22.78125},
    {16, 0, 94.4296875},
    {16, 1, 778.171875},
    {16, 2, 2837.5625},
    {16, 3, 6004.203125},
    {16, 4, 8130.3515625},
    {16, 5, 7316.625},
    {16, 6, 4392.3515625},
    {16, 7, 1715.296875},
    {16, 8, 409.59375},
    {16, 9, 52.734375},
    {16, 10, 2.7421875},
    {17, 0, 32.7578125},
    {17, 1, 260.578125},
    {17, 2, 911.953125},
    {17, 3, 1839.078125},
    {17, 4, 2348.34375},
    {17, 5, 1960.921875},
    {17, 6, 1064.171875},
    {17, 7, 358.359375},
    {17, 8, 66.7734375},
    {17, 9, 5.0625},
    {18, 0, 3.0234375},
    {18, 1, 27.5361328125},
    {18, 2, 111.9462890625},
    {18, 3, 267.08203125},
    {18, 4, 413.19140625},
    {18, 5, 431.771484375},
    {18, 6, 307.248046875},
    {18, 7, 146.00390625},
    {18, 8, 43.83984375},
    {18, 9, 7.3564453125},
    {18, 10, 0.5009765625},
    {19, 0, 0.615234375},
    {19, 1, 5.396484375},
    {19, 2, 21.0234375},
    {19, 3, 47.7421875},
    {19, 4, 69.64453125},
    {19, 5, 67.67578125},
    {19, 6, 43.8046875},
    {19, 7, 18.2109375},
    {19, 8, 4.412109375},
    {19, 9, 0.474609375},
    {20, 0, 0.03955078125},
    {20, 1, 0.3955078125},
    {20, 2, 1.77978515625},
    {20, 3, 4.74609375},
    {20, 4, 8.3056640625},
    {20, 5, 9.966796875},
    {20, 6, 8.3056640625},
    {20, 7, 4.74609375},
    {20, 8, 1.77978515625},
    {20, 9, 0.3955078125},
    {20, 10, 0.03955078125},
};

}  // namespace

StrictFeedbackSystem WingRockSystem() {
  StrictFeedbackSystem sys;
  sys.name = "wingrock";
  sys.integrators = 0;
  sys.p = 4;
  sys.l = 2;
  sys.theta_set = ThetaSet::Whole(4, 40.0);
  sys.output_indices = {0, 1};
  const std::vector<std::string> th{"t1", "t2", "t3", "t4"};
  auto with_theta = [&th](std::vector<std::string> v) {
    v.insert(v.end(), th.begin(), th.end());
    return v;
  };

  const std::vector<std::string> v1{"x1"};
  const std::vector<std::string> v2{"x1", "x2"};
  const std::vector<std::string> v3{"x1", "x2", "x3"};

  CascadeLevel l1;
  l1.h = ExpressionMap("0", v1, 64, "h1");
  l1.g = ExpressionMap("1", with_theta(v1), 64, "g1");
  l1.phi = ExpressionMap("0, 0, 0, 0", v1, 64, "phi1");
  l1.alpha = ExpressionMap("0, 0", v1, 64, "alpha1");
  l1.eta = ExpressionMap("1", v1, 64, "eta1");
  l1.mu = ExpressionMap("1", v1, 64, "mu1");

  CascadeLevel l2;
  l2.h = ExpressionMap("0", v2, 64, "h2");
  l2.g = ExpressionMap("1", with_theta(v2), 64, "g2");
  l2.phi = ExpressionMap("x1, x2, x1*x2, x2^2", v2, 64, "phi2");
  l2.alpha = ExpressionMap("1, 0", v2, 64, "alpha2");
  l2.eta = ExpressionMap("1", v2, 64, "eta2");
  l2.mu = ExpressionMap("1", v2, 64, "mu2");

  CascadeLevel l3;
  l3.h = ExpressionMap("0", v3, 64, "h3");
  l3.g = ExpressionMap("1", with_theta(v3), 64, "g3");
  l3.phi = ExpressionMap("0, 0, 0, 0", v3, 64, "phi3");
  l3.alpha = ExpressionMap("0, 1", v3, 64, "alpha3");
  l3.eta = ExpressionMap("1", v3, 64, "eta3");
  l3.mu = ExpressionMap("1", v3, 64, "mu3");

  sys.levels = {l1, l2, l3};
  return sys;
}

SmoothMap WingRockLevel3R() {
  // beta -> coefficients in t, lowest power first.
  std::map<int, std::vector<double>> by_beta;
  for (const TableEntry& e : kLevel3Table) {
    auto& poly = by_beta[e.beta];
    if (static_cast<int>(poly.size()) <= e.power) poly.resize(e.power + 1, 0.0);
    poly[e.power] += e.coeff;
  }
  return SmoothMap(
      3, 1, 64,
      [by_beta](const JetVec& in) {
        const Jet t = sqrt(1.0 + in[0] * in[0] + in[1] * in[1]);
        Jet sum = ConstantLike(t, 0.0);
        for (const auto& [beta, poly] : by_beta) {
          Jet acc = ConstantLike(t, poly.back());
          for (int k = static_cast<int>(poly.size()) - 2; k >= 0; --k) {
            acc = acc * t + poly[k];
          }
          sum += exp(beta * in[2]) * acc;
        }
        return JetVec{sum};
      },
      "R3");
}

MajorantPack WingRockMajorants() {
  MajorantPack pack(3);
  pack[0].r = ExpressionMap("1", {"x1"}, 64, "r1");
  pack[1].R = ExpressionMap("5 + exp(z) + 0.5*x1^2*(1 + exp(z))", {"x1", "z"},
                            64, "R2");
  pack[1].r = ExpressionMap("1", {"x1"}, 64, "r2");
  pack[1].rho = ExpressionMap("1.5 + 0.5*x2^2", {"x1", "x2"}, 64, "rho2");
  pack[2].R = WingRockLevel3R();
  pack[2].r = ExpressionMap("1", {"x1", "x2"}, 64, "r3");
  pack[2].rho = ExpressionMap("1", {"x1", "x2", "x3"}, 64, "rho3");
  return pack;
}

}  // namespace dads
