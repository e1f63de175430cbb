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

#include "lexer.h"

#include <fmt/core.h>

#include <cctype>

namespace lightlam {

SyntaxError::SyntaxError(const std::string &msg, int line, int column)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, msg)),
      line_(line),
      column_(column) {}

namespace detail {

std::string_view TokName(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kQuoted: return "scheme variable";
    case Tok::kNumber: return "number";
    case Tok::kLambda: return "'\\'";
    case Tok::kDot: return "'.'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBracket: return "'['";
    case Tok::kRBracket: return "']'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kSlash: return "'/'";
    case Tok::kComma: return "','";
    case Tok::kBang: return "'!'";
    case Tok::kCaret: return "'^'";
    case Tok::kPlus: return "'+'";
    case Tok::kBar: return "'|'";
    case Tok::kTurnstile: return "'|-'";
    case Tok::kColon: return "':'";
    case Tok::kArrow: return "'-o'";
    case Tok::kEquals: return "'='";
    case Tok::kGreater: return "'>'";
    case Tok::kEnd: return "end of input";
  }
  return "?";
}

namespace {

bool IdentStart(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool IdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

}  // namespace

std::vector<Token> Lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {  // comment to end of line
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok{Tok::kEnd, "", line, col};
    std::string_view rest = text.substr(i);
    auto single = [&](Tok k, std::size_t n) {
      tok.kind = k;
      tok.text = std::string(rest.substr(0, n));
      advance(n);
    };
    if (rest.starts_with("\xCE\xBB")) {
      single(Tok::kLambda, 2);
    } else if (rest.starts_with("\xE2\x8A\xB8")) {
      single(Tok::kArrow, 3);
    } else if (rest.starts_with("|-")) {
      single(Tok::kTurnstile, 2);
    } else if (rest.starts_with("-o")) {
      single(Tok::kArrow, 2);
    } else if (c == '\'' && i + 1 < text.size() && IdentStart(text[i + 1])) {
      std::size_t n = 1;
      while (i + n < text.size() && IdentChar(text[i + n])) ++n;
      tok.kind = Tok::kQuoted;
      tok.text = std::string(rest.substr(1, n - 1));
      advance(n);
    } else if (IdentStart(c)) {
      std::size_t n = 0;
      while (i + n < text.size() && IdentChar(text[i + n])) ++n;
      single(Tok::kIdent, n);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t n = 0;
      while (i + n < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i + n])))
        ++n;
      single(Tok::kNumber, n);
    } else {
      switch (c) {
        case '\\': single(Tok::kLambda, 1); break;
        case '.': single(Tok::kDot, 1); break;
        case '(': single(Tok::kLParen, 1); break;
        case ')': single(Tok::kRParen, 1); break;
        case '[': single(Tok::kLBracket, 1); break;
        case ']': single(Tok::kRBracket, 1); break;
        case '{': single(Tok::kLBrace, 1); break;
        case '}': single(Tok::kRBrace, 1); break;
        case '/': single(Tok::kSlash, 1); break;
        case ',': single(Tok::kComma, 1); break;
        case '!': single(Tok::kBang, 1); break;
        case '^': single(Tok::kCaret, 1); break;
        case '+': single(Tok::kPlus, 1); break;
        case '|': single(Tok::kBar, 1); break;
        case ':': single(Tok::kColon, 1); break;
        case '=': single(Tok::kEquals, 1); break;
        case '>': single(Tok::kGreater, 1); break;
        default:
          throw SyntaxError(fmt::format("unexpected character '{}'", c), line,
                            col);
      }
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Tok::kEnd, "", line, col});
  return out;
}

const Token &TokenStream::Peek(std::size_t ahead) const {
  std::size_t k = pos_ + ahead;
  if (k >= toks_.size()) return toks_.back();
  return toks_[k];
}

Token TokenStream::Next() {
  Token t = Peek();
  if (pos_ < toks_.size() - 1) ++pos_;
  return t;
}

Token TokenStream::Expect(Tok t) {
  if (!At(t)) {
    Fail(fmt::format("expected {}, found {}", TokName(t),
                     Peek().kind == Tok::kEnd
                         ? std::string(TokName(Tok::kEnd))
                         : fmt::format("'{}'", Peek().text)));
  }
  return Next();
}

bool TokenStream::Accept(Tok t) {
  if (!At(t)) return false;
  Next();
  return true;
}

void TokenStream::Fail(const std::string &msg) const { FailAt(Peek(), msg); }

void TokenStream::FailAt(const Token &tok, const std::string &msg) {
  throw SyntaxError(msg, tok.line, tok.column);
}

bool IsVarName(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '\'')) {
      return false;
    }
  }
  return true;
}

}  // namespace detail
}  // namespace lightlam
