#include <doctest.h>

#include "padic/errors.hpp"
#include "padic/residue.hpp"

namespace rd = padic::residue;

TEST_CASE("polynomials over Q_p") {
  const auto inc = rd::qp_polynomial_ergodic({mpq_class(1), mpq_class(1)}, 2);
  CHECK(inc.holds());
  CHECK(inc.levels == std::vector<unsigned>{3});

  const auto half = rd::qp_polynomial_ergodic({mpq_class(0), mpq_class(-1, 2), mpq_class(1, 2)}, 2);
  CHECK(half.fails());
  CHECK(half.levels == std::vector<unsigned>{4});
  CHECK(half.witness["integral"] == true);
  CHECK(half.witness["bijective"]["collision"] == nlohmann::json({0, 1}));
  CHECK(half.witness["transitive"]["bijective"] == false);

  const auto div = rd::qp_polynomial_ergodic({mpq_class(0), mpq_class(1, 2)}, 2);
  CHECK(div.fails());
  CHECK(div.witness["stage"] == "integrality");
  CHECK(div.witness["point"] == 1);
  CHECK(div.witness["value"] == "1/2");

  // Denominators prime to p are units: 7/3 = 5 mod 8 is a valid slope, 4/3 is not a unit.
  CHECK(rd::qp_polynomial_ergodic({mpq_class(1), mpq_class(4, 3)}, 2).fails());
  CHECK(rd::qp_polynomial_ergodic({mpq_class(1), mpq_class(7, 3)}, 2).holds());
  CHECK(rd::qp_polynomial_ergodic({mpq_class(1), mpq_class(5, 3)}, 2).fails());
  CHECK(rd::qp_polynomial_ergodic({mpq_class(2), mpq_class(1)}, 3).holds());
  CHECK_THROWS_AS(rd::qp_polynomial_ergodic({mpq_class(2)}, 3), padic::DomainError);
}
