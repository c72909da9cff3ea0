"""Lexer and recursive-descent parser for MJ."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import count

from ..errors import ParseError
from . import ast as A

KEYWORDS = {
    "class", "extends", "int", "bool", "void", "if", "else", "while",
    "return", "throw", "new", "null", "true", "false", "this",
}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>==|&&|\|\||[{}();,.=<+\-*/!])
    """,
    re.VERBOSE | re.DOTALL,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "id", "kw", "op", "eof"
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "block_comment":
            nls = text.count("\n")
            if nls:
                line += nls
                line_start = pos + text.rfind("\n") + 1
        elif kind in ("ws", "line_comment"):
            pass
        elif kind == "id" and text in KEYWORDS:
            tokens.append(Token("kw", text, line, col))
        else:
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, source: str, source_name: str = "<string>"):
        if _unterminated_comment(source):
            idx = source.rfind("/*")
            ln = source.count("\n", 0, idx) + 1
            raise ParseError("unterminated comment", ln, idx - source.rfind("\n", 0, idx))
        self.toks = tokenize(source)
        self.i = 0
        self.source_name = source_name
        self._eids = count()

    # -- token helpers --

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.advance()

    def expect_id(self) -> Token:
        if self.tok.kind != "id":
            self.error("expected identifier")
        return self.advance()

    def error(self, msg: str):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"{msg}, found {found}", t.line, t.col)

    def eid(self) -> int:
        return next(self._eids)

    # -- declarations --

    def program(self) -> A.Program:
        classes = []
        while self.tok.kind != "eof":
            classes.append(self.class_decl())
        return A.Program(tuple(classes), self.source_name)

    def class_decl(self) -> A.ClassDecl:
        first = self.expect("class")
        name = self.expect_id().text
        sup = None
        if self.at("extends"):
            self.advance()
            sup = self.expect_id().text
        self.expect("{")
        fields, methods = [], []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("expected '}'")
            type_tok = self.tok
            ty = self.type_name(allow_void=True)
            mname = self.expect_id().text
            if self.at("("):
                methods.append(self.method_rest(name, mname, ty, type_tok.line))
            else:
                if ty is None:
                    self.error("field cannot be void")
                self.expect(";")
                fields.append(A.FieldDecl(mname, ty, type_tok.line))
        last = self.expect("}")
        return A.ClassDecl(name, sup, tuple(fields), tuple(methods), first.line, last.line)

    def type_name(self, allow_void: bool = False):
        t = self.tok
        if t.kind == "kw" and t.text in ("int", "bool"):
            self.advance()
            return t.text
        if allow_void and self.at("void"):
            self.advance()
            return None
        if t.kind == "id":
            self.advance()
            return t.text
        self.error("expected type")

    def method_rest(self, owner, name, ret, first_line) -> A.MethodDecl:
        self.expect("(")
        params = []
        if not self.at(")"):
            while True:
                ty = self.type_name()
                params.append(A.Param(self.expect_id().text, ty))
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        self.expect("{")
        body = self.stmts_until_close()
        last = self.expect("}")
        return A.MethodDecl(owner, name, tuple(params), ret, body, first_line, last.line)

    # -- statements --

    def stmts_until_close(self) -> tuple:
        out = []
        while not self.at("}"):
            if self.tok.kind == "eof":
                self.error("expected '}'")
            out.append(self.stmt())
        return tuple(out)

    def block_or_stmt(self) -> tuple:
        if self.at("{"):
            self.advance()
            body = self.stmts_until_close()
            self.expect("}")
            return body
        return (self.stmt(),)

    def _starts_local_decl(self) -> bool:
        t = self.tok
        if t.kind == "kw" and t.text in ("int", "bool"):
            return True
        return t.kind == "id" and self.peek().kind == "id"

    def stmt(self):
        t = self.tok
        line = t.line
        if self.at("if"):
            self.advance()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.block_or_stmt()
            orelse = ()
            if self.at("else"):
                self.advance()
                orelse = self.block_or_stmt()
            return A.If(cond, then, orelse, line)
        if self.at("while"):
            self.advance()
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            return A.While(cond, self.block_or_stmt(), line)
        if self.at("return"):
            self.advance()
            value = None if self.at(";") else self.expr()
            self.expect(";")
            return A.Return(value, line)
        if self.at("throw"):
            self.advance()
            value = self.expr()
            self.expect(";")
            return A.Throw(value, line)
        if self._starts_local_decl():
            ty = self.type_name()
            name = self.expect_id().text
            init = None
            if self.at("="):
                self.advance()
                init = self.expr()
            self.expect(";")
            return A.LocalDecl(ty, name, init, line)
        e = self.expr()
        if self.at("="):
            if not isinstance(e, (A.Name, A.FieldRead)):
                self.error("invalid assignment target")
            self.advance()
            value = self.expr()
            self.expect(";")
            return A.Assign(e, value, line)
        if not isinstance(e, A.Call):
            self.error("expression statement must be a call")
        self.expect(";")
        return A.ExprStmt(e, line)

    # -- expressions, lowest precedence first --

    def expr(self):
        return self.binary(0)

    _LEVELS = (("||",), ("&&",), ("==",), ("<",), ("+", "-"), ("*", "/"))

    def binary(self, level: int):
        if level == len(self._LEVELS):
            return self.unary()
        left = self.binary(level + 1)
        while self.tok.kind == "op" and self.tok.text in self._LEVELS[level]:
            op = self.advance().text
            right = self.binary(level + 1)
            left = A.Binary(op, left, right, self.eid())
        return left

    def unary(self):
        if self.at("!"):
            self.advance()
            return A.Unary("!", self.unary(), self.eid())
        return self.postfix()

    def postfix(self):
        e = self.primary()
        while self.at("."):
            self.advance()
            name = self.expect_id().text
            if self.at("("):
                e = A.Call(e, name, self.args(), self.eid())
            else:
                e = A.FieldRead(e, name, self.eid())
        return e

    def args(self) -> tuple:
        self.expect("(")
        out = []
        if not self.at(")"):
            while True:
                out.append(self.expr())
                if not self.at(","):
                    break
                self.advance()
        self.expect(")")
        return tuple(out)

    def primary(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return A.IntLit(int(t.text), self.eid())
        if t.kind == "kw":
            if t.text in ("true", "false"):
                self.advance()
                return A.BoolLit(t.text == "true", self.eid())
            if t.text == "null":
                self.advance()
                return A.NullLit(self.eid())
            if t.text == "this":
                self.advance()
                return A.This(self.eid())
            if t.text == "new":
                self.advance()
                cls = self.expect_id().text
                self.expect("(")
                self.expect(")")
                return A.New(cls, self.eid())
        if t.kind == "id":
            self.advance()
            if self.at("("):
                return A.Call(None, t.text, self.args(), self.eid())
            return A.Name(t.text, self.eid())
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        self.error("expected expression")


def _unterminated_comment(source: str) -> bool:
    stripped = re.sub(r"/\*.*?\*/", "", source, flags=re.DOTALL)
    stripped = re.sub(r"//[^\n]*", "", stripped)
    return "/*" in stripped


def parse(source: str, source_name: str = "<string>") -> A.Program:
    """Parse MJ source text into a :class:`Program`.

    Raises :class:`ParseError` with a 1-based line and column on malformed input.
    """
    return Parser(source, source_name).program()
