// Copyright 2026 The lightlam Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lightlam/eaterm.h"
#include "lightlam/syntax.h"
#include "lightlam/types.h"

namespace lightlam::detail {

enum class Tok {
  kIdent,
  kQuoted,  // 'name, a scheme variable
  kNumber,
  kLambda,
  kDot,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kLBrace,
  kRBrace,
  kSlash,
  kComma,
  kBang,
  kCaret,
  kPlus,
  kBar,
  kTurnstile,
  kColon,
  kArrow,
  kEquals,
  kGreater,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::string_view TokName(Tok t);

std::vector<Token> Lex(std::string_view text);

/** A cursor over a token vector with error helpers. */
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token &Peek(std::size_t ahead = 0) const;
  bool At(Tok t) const { return Peek().kind == t; }
  Token Next();
  Token Expect(Tok t);
  bool Accept(Tok t);
  [[noreturn]] void Fail(const std::string &msg) const;
  [[noreturn]] static void FailAt(const Token &tok, const std::string &msg);

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool IsVarName(std::string_view s);

// Parsers that stop at the first token they cannot use.
Term ParseTermFrom(TokenStream &ts, const ConstantEnv *env);
EATerm ParseEATermFrom(TokenStream &ts);
Type ParseTypeFrom(TokenStream &ts,
                   const std::set<std::string, std::less<>> *algebras);

}  // namespace lightlam::detail
