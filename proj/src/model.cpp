#include "cascade/model.hpp"

#include <utility>

namespace cascade {

std::string_view to_string(MentionKind kind) {
  return kind == MentionKind::Original ? "original" : "retweet";
}

std::optional<MentionKind> parse_mention_kind(std::string_view text) {
  if (text == "original") return MentionKind::Original;
  if (text == "retweet") return MentionKind::Retweet;
  return std::nullopt;
}

Reason classify_error(int error_code) noexcept {
  switch (error_code) {
    case kErrorDeleted:
      return Reason::Deleted;
    case kErrorSuspended:
      return Reason::Suspended;
    case kErrorProtected:
      return Reason::Protected;
    case kErrorPageNotFound:
      return Reason::PageNotFound;
    default:
      return Reason::Other;
  }
}

std::optional<int> error_code_for(Reason reason) noexcept {
  switch (reason) {
    case Reason::Deleted:
      return kErrorDeleted;
    case Reason::Suspended:
      return kErrorSuspended;
    case Reason::Protected:
      return kErrorProtected;
    case Reason::PageNotFound:
      return kErrorPageNotFound;
    case Reason::Other:
      break;
  }
  return std::nullopt;
}

std::string_view to_string(Reason reason) {
  switch (reason) {
    case Reason::Deleted:
      return "Deleted";
    case Reason::Suspended:
      return "Suspended";
    case Reason::Protected:
      return "Protected";
    case Reason::PageNotFound:
      return "PageNotFound";
    case Reason::Other:
      break;
  }
  return "Other";
}

std::string_view to_string(Availability availability) {
  return availability == Availability::Available ? "available" : "unavailable";
}

StatusRecord make_available(std::string tweet_id, Timestamp checked_at) {
  StatusRecord r;
  r.tweet_id = std::move(tweet_id);
  r.checked_at = checked_at;
  return r;
}

StatusRecord make_unavailable(std::string tweet_id, std::optional<int> error_code,
                              Timestamp checked_at) {
  StatusRecord r;
  r.tweet_id = std::move(tweet_id);
  r.availability = Availability::Unavailable;
  r.reason = error_code ? classify_error(*error_code) : Reason::Other;
  r.error_code = error_code;
  r.checked_at = checked_at;
  return r;
}

}  // namespace cascade
