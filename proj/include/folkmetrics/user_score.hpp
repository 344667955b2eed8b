#pragma once

#include "folkmetrics/ids.hpp"

namespace folkmetrics {

struct UserScore {
  UserId user;
  double score = 0.0;

  friend bool operator==(const UserScore&, const UserScore&) = default;
};

}  // namespace folkmetrics
