#pragma once

// Template definitions for field.hpp.

#include "ucp/error.hpp"

namespace ucp {

template <typename R, typename T, typename U, typename F>
Field<R> zip_fields(const Field<T>& a, const Field<U>& b, F&& fn) {
  if (!(a.grid() == b.grid())) throw ValidationError("zip_fields: grid mismatch");
  std::vector<R> out(a.grid().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = fn(a[k], b[k]);
  return Field<R>(a.grid(), std::move(out));
}

}  // namespace ucp
