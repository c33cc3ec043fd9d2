# -*- coding: utf-8 -*-
"""
进程的 ASCII 具体语法

    P ::= "0" | "(new" NAME ")" P | "!" P | P "|" P
        | INT ":" B "." P | INT ":" NAME "!" T "." P
        | INT ":" "case" XVAR "of" "some(" YVAR ")" ":" P "else" P "end"
    B ::= NAME "?" XVAR | "&" ("forall"|"exists") "(" B ("," B)* ")"
    T ::= NAME | YVAR

"|" 优先级最低且左结合，前缀构造比 "|" 结合得更紧；"//" 开始行注释。
"""

import re
from dataclasses import dataclass
from typing import Iterator

from core.exceptions import ParseError, ValidationError
from core.logger import logger
from apps.calculus.ast import (
    KEYWORDS,
    Bind,
    Binder,
    Case,
    Const,
    Guard,
    Input,
    Nil,
    Output,
    Par,
    Process,
    Quality,
    Repl,
    Restrict,
    Term,
    Var,
    validate,
)


@dataclass(frozen=True)
class SourceSpan:
    """源码位置，行列均从 1 开始"""
    line: int
    column: int


@dataclass(frozen=True)
class Token:
    kind: str  # INT | IDENT | PUNCT | EOF
    text: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        return repr(self.text)


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<ident>[a-zA-Z_][a-zA-Z0-9_']*)"
    r"|(?P<punct>[()!|:.?&,])"
)


def tokenize(text: str) -> Iterator[Token]:
    """把源文本切分为记号流，末尾附加 EOF"""
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        span = SourceSpan(line, pos - line_start + 1)
        if match is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", span.line, span.column, expected="token"
            )
        kind = match.lastgroup
        lexeme = match.group()
        if kind == "int":
            yield Token("INT", lexeme, span)
        elif kind == "ident":
            yield Token("IDENT", lexeme, span)
        elif kind == "punct":
            yield Token("PUNCT", lexeme, span)
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            line_start = pos + lexeme.rindex("\n") + 1
        pos = match.end()
    yield Token("EOF", "", SourceSpan(line, pos - line_start + 1))


class _Parser:
    """递归下降解析器；项变量按作用域与常量区分"""

    def __init__(self, text: str) -> None:
        self.tokens = list(tokenize(text))
        self.pos = 0
        self.y_scope: list[str] = []

    def peek(self, offset: int = 0) -> Token:
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.peek()
        self.pos += 1
        return token

    def fail(self, expected: str) -> ParseError:
        token = self.peek()
        return ParseError(
            f"expected {expected} but found {token.describe()}",
            token.span.line,
            token.span.column,
            expected=expected,
        )

    def is_punct(self, text: str, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token.kind == "PUNCT" and token.text == text

    def is_keyword(self, text: str, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token.kind == "IDENT" and token.text == text

    def expect_punct(self, text: str) -> Token:
        if not self.is_punct(text):
            raise self.fail(repr(text))
        return self.advance()

    def expect_keyword(self, text: str) -> Token:
        if not self.is_keyword(text):
            raise self.fail(repr(text))
        return self.advance()

    def expect_ident(self, what: str) -> str:
        token = self.peek()
        if token.kind != "IDENT" or token.text in KEYWORDS:
            raise self.fail(what)
        return self.advance().text

    def parse(self) -> Process:
        process = self.parse_par()
        if self.peek().kind != "EOF":
            raise self.fail("'|' or end of input")
        return process

    def parse_par(self) -> Process:
        left = self.parse_unary()
        while self.is_punct("|"):
            self.advance()
            left = Par(left, self.parse_unary())
        return left

    def parse_unary(self) -> Process:
        token = self.peek()
        if token.kind == "INT":
            if self.is_punct(":", 1):
                return self.parse_action()
            if token.text == "0":
                self.advance()
                return Nil()
            raise self.fail("':' after label")
        if self.is_punct("("):
            if self.is_keyword("new", 1):
                self.advance()
                self.advance()
                name = self.expect_ident("name")
                self.expect_punct(")")
                return Restrict(name, self.parse_unary())
            self.advance()
            process = self.parse_par()
            self.expect_punct(")")
            return process
        if self.is_punct("!"):
            self.advance()
            return Repl(self.parse_unary())
        raise self.fail("process")

    def parse_action(self) -> Process:
        token = self.advance()
        label = int(token.text)
        if label <= 0:
            raise ParseError(
                f"label {label} is not positive", token.span.line, token.span.column, expected="positive label"
            )
        self.expect_punct(":")
        if self.is_keyword("case"):
            self.advance()
            scrutinee = self.expect_ident("input variable")
            self.expect_keyword("of")
            self.expect_keyword("some")
            self.expect_punct("(")
            yvar = self.expect_ident("term variable")
            self.expect_punct(")")
            self.expect_punct(":")
            self.y_scope.append(yvar)
            then = self.parse_par()
            self.y_scope.pop()
            self.expect_keyword("else")
            else_ = self.parse_par()
            self.expect_keyword("end")
            return Case(label, scrutinee, yvar, then, else_)
        if self.is_punct("&"):
            binder = self.parse_binder()
            self.expect_punct(".")
            return Bind(label, binder, self.parse_unary())
        channel = self.expect_ident("name, '&' or 'case'")
        if self.is_punct("?"):
            self.advance()
            var = self.expect_ident("input variable")
            self.expect_punct(".")
            return Bind(label, Input(channel, var), self.parse_unary())
        if self.is_punct("!"):
            self.advance()
            payload = self.parse_term()
            self.expect_punct(".")
            return Output(label, channel, payload, self.parse_unary())
        raise self.fail("'?' or '!'")

    def parse_binder(self) -> Binder:
        if self.is_punct("&"):
            self.advance()
            token = self.peek()
            if token.kind != "IDENT" or token.text not in (Guard.FORALL.value, Guard.EXISTS.value):
                raise self.fail("'forall' or 'exists'")
            guard = Guard(self.advance().text)
            self.expect_punct("(")
            subs = [self.parse_binder()]
            while self.is_punct(","):
                self.advance()
                subs.append(self.parse_binder())
            self.expect_punct(")")
            return Quality(guard, tuple(subs))
        channel = self.expect_ident("name or '&'")
        self.expect_punct("?")
        return Input(channel, self.expect_ident("input variable"))

    def parse_term(self) -> Term:
        text = self.expect_ident("name or term variable")
        if text in self.y_scope:
            return Var(text)
        return Const(text)


def parse_process(text: str) -> Process:
    """
    解析并校验进程

    Args:
        text: 源文本

    Returns:
        Process: 良构的进程

    Raises:
        ParseError: 语法错误，带位置与期望记号
        ValidationError: 标签重复、变量重复绑定或未绑定
    """
    process = _Parser(text).parse()
    report = validate(process)
    if not report.ok:
        raise ValidationError(list(report.violations))
    logger.debug("进程解析完成")
    return process


def _binder_text(b: Binder) -> str:
    if isinstance(b, Input):
        return f"{b.channel}?{b.var}"
    return f"&{b.guard.value}({', '.join(_binder_text(sub) for sub in b.subs)})"


def _term_text(t: Term) -> str:
    return t.name


def _unary(p: Process) -> str:
    if isinstance(p, Nil):
        return "0"
    if isinstance(p, Par):
        return f"({_par(p)})"
    if isinstance(p, Restrict):
        return f"(new {p.name}) {_unary(p.body)}"
    if isinstance(p, Repl):
        return f"!{_unary(p.body)}"
    if isinstance(p, Bind):
        return f"{p.label}: {_binder_text(p.binder)} . {_unary(p.body)}"
    if isinstance(p, Output):
        return f"{p.label}: {p.channel}!{_term_text(p.payload)} . {_unary(p.body)}"
    return (
        f"{p.label}: case {p.scrutinee} of some({p.yvar}): "
        f"{_par(p.then)} else {_par(p.else_)} end"
    )


def _par(p: Process) -> str:
    if isinstance(p, Par):
        return f"{_par(p.left)} | {_unary(p.right)}"
    return _unary(p)


def pretty(p: Process) -> str:
    """输出规范形式，重新解析后结构相等"""
    return _par(p)


__all__ = ["SourceSpan", "Token", "tokenize", "parse_process", "pretty"]
