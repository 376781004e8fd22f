#include "uavnet/types.hpp"

#include <cmath>

namespace uavnet
{

bool
Schedule::is_relaxed_feasible(double tol) const
{
  for (std::size_t t = 0; t < slots(); ++t)
    {
      for (std::size_t i = 0; i < ugvs(); ++i)
        {
          double row = 0.0;
          for (std::size_t j = 0; j < uavs(); ++j)
            {
              const double a = (*this)(i, j, t);
              if (!std::isfinite(a) || a < -tol || a > 1.0 + tol)
                return false;
              row += a;
            }
          if (row > 1.0 + tol)
            return false;
        }
      for (std::size_t j = 0; j < uavs(); ++j)
        {
          double col = 0.0;
          for (std::size_t i = 0; i < ugvs(); ++i)
            col += (*this)(i, j, t);
          if (col > 1.0 + tol)
            return false;
        }
    }
  return true;
}

bool
Schedule::is_binary_feasible() const
{
  for (double a : values())
    {
      if (a != 0.0 && a != 1.0)
        return false;
    }
  return is_relaxed_feasible(0.0);
}

double
Schedule::binary_residual() const
{
  double r = 0.0;
  for (double a : values())
    r += a * (1.0 - a);
  return r;
}

double
Schedule::ugv_activity(std::size_t p, std::size_t t) const
{
  double s = 0.0;
  for (std::size_t q = 0; q < uavs(); ++q)
    s += (*this)(p, q, t);
  return s;
}

} // namespace uavnet
