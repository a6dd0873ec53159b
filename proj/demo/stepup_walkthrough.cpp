// Walks one stepping-up round end to end: pick a base sequence on the
// line, search a certified epsilon, inspect the stepped-up sequence,
// and compare the induced coloring against the combinatorial transfer.

#include <iostream>

#include "otkit/construct.hpp"
#include "otkit/homogeneity.hpp"
#include "otkit/search.hpp"

using namespace otkit;

int main() {
  PointSequence base(1);
  for (int v : {1, 2, 3}) base.push_back(Point{Rational(v)});

  Predicate phi = orientation_predicate(1);
  OrderPredicate prec = first_coord_order();

  ChosenEpsilon chosen = choose_epsilon(base, phi, prec);
  std::cout << "certified epsilon: " << chosen.epsilon.to_fraction_string() << "\n";
  std::cout << "stepped-up points (" << chosen.stepped.size() << " in R^2):\n";
  for (size_t i = 0; i < chosen.stepped.size(); ++i) {
    const Point& q = chosen.stepped[i];
    std::cout << "  " << BinaryVector::from_index(3, i).to_string() << " -> ("
              << q[0].to_fraction_string() << ", " << q[1].to_fraction_string() << ")\n";
  }

  Coloring chi = induced_coloring(phi, base);
  Coloring transferred = step_up_coloring(chi);
  Predicate psi = step_up_predicate(phi, prec);
  Coloring induced = induced_coloring(psi, chosen.stepped);

  int agree = 0, total = 0;
  detail::for_each_combination(chosen.stepped.size(), 3, [&](std::span<const int> idx) {
    std::vector<int64_t> tuple = {idx[0] + 1, idx[1] + 1, idx[2] + 1};
    ++total;
    if (induced(tuple) == transferred(tuple)) ++agree;
    return true;
  });
  std::cout << "induced vs transferred coloring: " << agree << "/" << total << " tuples agree\n";

  SearchResult monotone = longest_monotone_subsequence(
      std::vector<Rational>{Rational(3), Rational(1), Rational(4), Rational(1), Rational(5)});
  std::cout << "longest monotone subsequence of (3,1,4,1,5): " << monotone.witness.size()
            << " terms\n";
  return 0;
}
