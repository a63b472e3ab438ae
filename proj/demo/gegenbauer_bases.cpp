// Exact basis changes between monomials, Chebyshev and Gegenbauer polynomials.

#include <iostream>

#include "confamp/json_io.hpp"

using namespace confamp;

int main() {
  const HalfInt lambda(1);
  std::cout << "x^4 in C^(1): " << canonical_dump(to_json(monomial_to_gegenbauer(4, lambda)), 0) << "\n";
  std::cout << "T_4 in C^(1): " << canonical_dump(to_json(chebyshev_to_gegenbauer(4, lambda)), 0) << "\n";
  std::cout << "C_2 C_3 in C^(1): " << canonical_dump(to_json(product_linearize(2, 3, lambda)), 0) << "\n";
  const GegenCombo back = reproject_gegenbauer(HalfInt::from_twice(3), 3, lambda);
  std::cout << "C^(3/2)_3 in C^(1): " << canonical_dump(to_json(back), 0) << "\n";
  std::cout << "round trip exact: " << std::boolalpha
            << (expand(back) == gegenbauer_coeffs({HalfInt::from_twice(3), 3})) << "\n";
  std::cout << "zonal coefficient, D=3, n=2: " << zonal_coefficient(3, 2) << "\n";
}
