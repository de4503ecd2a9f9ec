#include "core/error.hpp"

namespace nerkit {

const char* errc_name(errc code) {
  switch (code) {
    case errc::io: return "IoError";
    case errc::missing_file: return "MissingFile";
    case errc::duplicate_doc_id: return "DuplicateDocId";
    case errc::invalid_encoding: return "InvalidEncoding";
    case errc::parse: return "ParseError";
    case errc::invalid_bio: return "InvalidBio";
    case errc::overlap_conflict: return "OverlapConflict";
    case errc::span_out_of_range: return "SpanOutOfRange";
    case errc::missing_class: return "MissingClass";
    case errc::empty_split: return "EmptySplit";
    case errc::alignment: return "AlignmentError";
    case errc::missing_query_embedding: return "MissingQueryEmbedding";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace nerkit
