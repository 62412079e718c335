#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "framelab/model.hpp"

namespace framelab {

using Json = nlohmann::ordered_json;

/// Real fields store plain numbers; complex fields store [re, im] pairs.
/// Decoding accepts both forms.
Json encode_matrix(const Matrix& m, Field field);
Json encode_vector(const Vector& v, Field field);
Matrix decode_matrix(const Json& j, const std::string& what);
Vector decode_vector(const Json& j, const std::string& what);

Json document_to_json(const FrameDocument& doc);
FrameDocument document_from_json(const Json& j);

/// Text form used for every file the project writes: two-space indent,
/// doubles at 17 significant digits, short numeric arrays on one line.
std::string format_json(const Json& j);

/// Throws InputError on malformed text or an invalid system.
Json parse_json_text(const std::string& text, const std::string& origin = "<input>");

std::string save_document_text(const FrameDocument& doc);
FrameDocument load_document_text(const std::string& text, const std::string& origin = "<input>");

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

FrameDocument load_document(const std::string& path);
void save_document(const std::string& path, const FrameDocument& doc);

/// Ground truth stored next to a fixture: the spectrum of S and, for every
/// operator, frame-ness from a rank test on [T k], A_op from PSD bisection
/// and B_op = lambda_max(S).
Json oracle_sidecar(const FrameDocument& doc);

}  // namespace framelab
