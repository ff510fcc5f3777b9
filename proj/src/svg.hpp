#ifndef ABE_SVG_HPP
#define ABE_SVG_HPP

#include <iosfwd>
#include <string>

namespace abe {

// Render the summary rows of a sweep CSV as a self-contained SVG line chart:
// one solid series per (estimator, loss) with the empirical MSE on a log
// axis, matching dashed series for the theory predictions. Byte-deterministic
// for identical input.
void render_plot(std::istream& csv, std::ostream& svg);

} // namespace abe

#endif
