/** The expression language used by formulas, bindings, effects and
 * constraint predicates — parser and static analysis.
 *
 * This is a client-side mirror of the backend's language so the editor can
 * anchor errors to fields before a request is ever sent.  Grammar, loosest
 * to tightest:
 *
 *     or_expr   := and_expr  ("or"  and_expr)*
 *     and_expr  := cmp_expr  ("and" cmp_expr)*
 *     cmp_expr  := add_expr  (("<"|"<="|">"|">="|"=="|"!=") add_expr)*
 *     add_expr  := mul_expr  (("+"|"-") mul_expr)*
 *     mul_expr  := unary     (("*"|"/") unary)*
 *     unary     := ("-"|"not") unary | power
 *     power     := atom ("^" unary)?          -- right-associative
 *     atom      := NUMBER | "true" | "false" | NAME | NAME "(" args ")"
 *               | "(" or_expr ")"
 *
 * No implicit multiplication (`2pi` is an error); identifiers may contain a
 * single dot (`p.x`) addressing a component of a two-dimensional control.
 */

export type Span = [number, number];

export type Expr =
  | { node: "num"; value: number; span: Span }
  | { node: "bool"; value: boolean; span: Span }
  | { node: "const"; name: string; span: Span }
  | { node: "var"; name: string; span: Span }
  | { node: "unary"; op: "neg" | "not"; operand: Expr; span: Span }
  | { node: "binary"; op: string; left: Expr; right: Expr; span: Span }
  | { node: "call"; func: string; args: Expr[]; span: Span };

export const CONSTANTS: Record<string, number> = { pi: Math.PI, e: Math.E };

export const FUNCTIONS: Record<string, number> = {
  sin: 1,
  cos: 1,
  tan: 1,
  sqrt: 1,
  abs: 1,
  exp: 1,
  log: 1,
  min: 2,
  max: 2,
  floor: 1,
  round: 1,
};

export const RESERVED_WORDS: ReadonlySet<string> = new Set([
  ...Object.keys(CONSTANTS),
  ...Object.keys(FUNCTIONS),
  "and",
  "or",
  "not",
  "true",
  "false",
  "value",
]);

export const ARITHMETIC_OPS = ["+", "-", "*", "/", "^"] as const;
export const BOOLEAN_OPS = ["and", "or"] as const;

export type ErrorCategory = "lexical" | "syntax" | "arity";

export class ExprError extends Error {
  constructor(
    message: string,
    public readonly span: Span,
    public readonly category: ErrorCategory,
  ) {
    super(message);
  }

  override toString(): string {
    return `${this.category} error at ${this.span[0]}..${this.span[1]}: ${this.message}`;
  }
}

export class KindMismatch extends Error {
  constructor(
    message: string,
    public readonly span: Span | null = null,
  ) {
    super(message);
  }
}

export class UnboundVariable extends Error {
  constructor(
    public readonly name: string,
    public readonly span: Span | null = null,
  ) {
    super(`unbound variable '${name}'`);
  }
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

interface Token {
  kind: "num" | "name" | "op" | "end";
  text: string;
  span: Span;
}

const KEYWORDS = new Set(["and", "or", "not", "true", "false"]);
const TWO_CHAR_OPS = new Set(["<=", ">=", "==", "!="]);
const ONE_CHAR_OPS = "+-*/^<>(),";

const isDigit = (ch: string): boolean => ch >= "0" && ch <= "9";
const isNameStart = (ch: string): boolean => /[\p{L}_]/u.test(ch);
const isNameChar = (ch: string): boolean => /[\p{L}\p{N}_]/u.test(ch);

function lex(source: string): Token[] {
  const tokens: Token[] = [];
  let i = 0;
  const n = source.length;
  while (i < n) {
    const ch = source[i]!;
    if (ch === " " || ch === "\t" || ch === "\r" || ch === "\n") {
      i += 1;
      continue;
    }
    if (isDigit(ch)) {
      const start = i;
      while (i < n && isDigit(source[i]!)) i += 1;
      if (i < n && source[i] === "." && i + 1 < n && isDigit(source[i + 1]!)) {
        i += 1;
        while (i < n && isDigit(source[i]!)) i += 1;
      }
      if (i < n && (source[i] === "e" || source[i] === "E")) {
        let j = i + 1;
        if (j < n && (source[j] === "+" || source[j] === "-")) j += 1;
        if (j < n && isDigit(source[j]!)) {
          i = j;
          while (i < n && isDigit(source[i]!)) i += 1;
        }
      }
      tokens.push({ kind: "num", text: source.slice(start, i), span: [start, i] });
      continue;
    }
    if (isNameStart(ch)) {
      const start = i;
      while (i < n && isNameChar(source[i]!)) i += 1;
      // one optional dotted component: p.x
      if (i < n && source[i] === "." && i + 1 < n && isNameStart(source[i + 1]!)) {
        i += 1;
        while (i < n && isNameChar(source[i]!)) i += 1;
      }
      tokens.push({ kind: "name", text: source.slice(start, i), span: [start, i] });
      continue;
    }
    const two = source.slice(i, i + 2);
    if (TWO_CHAR_OPS.has(two)) {
      tokens.push({ kind: "op", text: two, span: [i, i + 2] });
      i += 2;
      continue;
    }
    if (ONE_CHAR_OPS.includes(ch)) {
      tokens.push({ kind: "op", text: ch, span: [i, i + 1] });
      i += 1;
      continue;
    }
    throw new ExprError(`unexpected character '${ch}'`, [i, i + 1], "lexical");
  }
  tokens.push({ kind: "end", text: "", span: [n, n] });
  return tokens;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

class Parser {
  pos = 0;

  constructor(private readonly tokens: Token[]) {}

  get cur(): Token {
    return this.tokens[this.pos]!;
  }

  advance(): Token {
    return this.tokens[this.pos++]!;
  }

  atOp(...texts: string[]): boolean {
    return this.cur.kind === "op" && texts.includes(this.cur.text);
  }

  atKeyword(word: string): boolean {
    return this.cur.kind === "name" && this.cur.text === word;
  }

  expectOp(text: string, context: string): Token {
    if (!this.atOp(text)) {
      const got = this.cur.text || "end of input";
      throw new ExprError(`expected '${text}' ${context}, found '${got}'`, this.cur.span, "syntax");
    }
    return this.advance();
  }

  orExpr(): Expr {
    let left = this.andExpr();
    while (this.atKeyword("or")) {
      this.advance();
      const right = this.andExpr();
      left = { node: "binary", op: "or", left, right, span: join(left, right) };
    }
    return left;
  }

  andExpr(): Expr {
    let left = this.cmpExpr();
    while (this.atKeyword("and")) {
      this.advance();
      const right = this.cmpExpr();
      left = { node: "binary", op: "and", left, right, span: join(left, right) };
    }
    return left;
  }

  cmpExpr(): Expr {
    let left = this.addExpr();
    while (this.atOp("<", "<=", ">", ">=", "==", "!=")) {
      const op = this.advance().text;
      const right = this.addExpr();
      left = { node: "binary", op, left, right, span: join(left, right) };
    }
    return left;
  }

  addExpr(): Expr {
    let left = this.mulExpr();
    while (this.atOp("+", "-")) {
      const op = this.advance().text;
      const right = this.mulExpr();
      left = { node: "binary", op, left, right, span: join(left, right) };
    }
    return left;
  }

  mulExpr(): Expr {
    let left = this.unary();
    while (this.atOp("*", "/")) {
      const op = this.advance().text;
      const right = this.unary();
      left = { node: "binary", op, left, right, span: join(left, right) };
    }
    return left;
  }

  unary(): Expr {
    if (this.atOp("-")) {
      const tok = this.advance();
      const operand = this.unary();
      return { node: "unary", op: "neg", operand, span: [tok.span[0], operand.span[1]] };
    }
    if (this.atKeyword("not")) {
      const tok = this.advance();
      const operand = this.unary();
      return { node: "unary", op: "not", operand, span: [tok.span[0], operand.span[1]] };
    }
    return this.power();
  }

  power(): Expr {
    const base = this.atom();
    if (this.atOp("^")) {
      this.advance();
      // the exponent may carry its own unary minus: 2^-3
      const exponent = this.unary();
      return { node: "binary", op: "^", left: base, right: exponent, span: join(base, exponent) };
    }
    return base;
  }

  atom(): Expr {
    const tok = this.cur;
    if (tok.kind === "num") {
      this.advance();
      return { node: "num", value: Number(tok.text), span: tok.span };
    }
    if (tok.kind === "name") {
      if (tok.text === "true") {
        this.advance();
        return { node: "bool", value: true, span: tok.span };
      }
      if (tok.text === "false") {
        this.advance();
        return { node: "bool", value: false, span: tok.span };
      }
      if (KEYWORDS.has(tok.text)) {
        throw new ExprError(`'${tok.text}' is not valid here`, tok.span, "syntax");
      }
      this.advance();
      if (this.atOp("(")) {
        return this.call(tok);
      }
      if (tok.text in FUNCTIONS) {
        throw new ExprError(
          `'${tok.text}' is a function name; call it with parentheses`,
          tok.span,
          "syntax",
        );
      }
      if (tok.text in CONSTANTS) {
        return { node: "const", name: tok.text, span: tok.span };
      }
      return { node: "var", name: tok.text, span: tok.span };
    }
    if (this.atOp("(")) {
      this.advance();
      const inner = this.orExpr();
      this.expectOp(")", "to close '('");
      return inner;
    }
    const got = tok.text || "end of input";
    throw new ExprError(`expected a value, found '${got}'`, tok.span, "syntax");
  }

  call(name: Token): Expr {
    if (name.text in CONSTANTS) {
      throw new ExprError(`'${name.text}' is a constant, not a function`, name.span, "syntax");
    }
    if (!(name.text in FUNCTIONS)) {
      throw new ExprError(`unknown function '${name.text}'`, name.span, "syntax");
    }
    this.expectOp("(", "after function name");
    const args: Expr[] = [];
    if (!this.atOp(")")) {
      args.push(this.orExpr());
      while (this.atOp(",")) {
        this.advance();
        args.push(this.orExpr());
      }
    }
    const rparen = this.expectOp(")", "to close the argument list");
    const span: Span = [name.span[0], rparen.span[1]];
    const want = FUNCTIONS[name.text]!;
    if (args.length !== want) {
      throw new ExprError(
        `${name.text} takes ${want} argument${want !== 1 ? "s" : ""}, got ${args.length}`,
        span,
        "arity",
      );
    }
    return { node: "call", func: name.text, args, span };
  }
}

const join = (left: Expr, right: Expr): Span => [left.span[0], right.span[1]];

/** Parse `source`; throws `ExprError` with a category and character span. */
export function parseExpr(source: string): Expr {
  const tokens = lex(source);
  if (tokens[0]!.kind === "end") {
    throw new ExprError("empty expression", [0, source.length], "syntax");
  }
  const parser = new Parser(tokens);
  const tree = parser.orExpr();
  const trailing = parser.cur;
  if (trailing.kind !== "end") {
    if ((trailing.kind === "num" || trailing.kind === "name") && !KEYWORDS.has(trailing.text)) {
      throw new ExprError(
        `expected an operator before '${trailing.text}'` +
          " (implicit multiplication is not supported; write '*')",
        trailing.span,
        "syntax",
      );
    }
    throw new ExprError(`unexpected '${trailing.text}'`, trailing.span, "syntax");
  }
  return tree;
}

// ---------------------------------------------------------------------------
// analysis
// ---------------------------------------------------------------------------

/** Variable names referenced by `e` (constants excluded). */
export function freeVars(e: Expr): Set<string> {
  const out = new Set<string>();
  const walk = (node: Expr): void => {
    switch (node.node) {
      case "var":
        out.add(node.name);
        break;
      case "unary":
        walk(node.operand);
        break;
      case "binary":
        walk(node.left);
        walk(node.right);
        break;
      case "call":
        node.args.forEach(walk);
        break;
      default:
        break;
    }
  };
  walk(e);
  return out;
}

export class CycleError extends Error {
  constructor(public readonly path: string[]) {
    super("dependency cycle " + path.join(" → "));
  }
}

/** Order derived-variable names so each comes after everything it uses.
 *
 * Ties break by declaration order; throws `CycleError` with the full cycle
 * path when no order exists.
 */
export function dependencyOrder(formulas: [string, Expr][]): string[] {
  const names = formulas.map(([name]) => name);
  const position = new Map(names.map((name, i) => [name, i]));
  const deps = new Map<string, string[]>();
  for (const [name, tree] of formulas) {
    const used = [...freeVars(tree)].filter((u) => position.has(u));
    used.sort((a, b) => position.get(a)! - position.get(b)!);
    deps.set(name, used);
  }

  const order: string[] = [];
  const placed = new Set<string>();
  const remaining = [...names];
  while (remaining.length > 0) {
    const ready = remaining.filter((n) => deps.get(n)!.every((d) => placed.has(d)));
    if (ready.length === 0) {
      throw new CycleError(findCycle(remaining, deps));
    }
    const next = ready[0]!; // declaration order: `remaining` preserves it
    order.push(next);
    placed.add(next);
    remaining.splice(remaining.indexOf(next), 1);
  }
  return order;
}

function findCycle(remaining: string[], deps: Map<string, string[]>): string[] {
  // Every name left participates in or leads into a cycle; walk to a repeat.
  const stuck = new Set(remaining);
  const path = [remaining[0]!];
  const seen = new Map<string, number>([[remaining[0]!, 0]]);
  for (;;) {
    const next = deps.get(path[path.length - 1]!)!.find((d) => stuck.has(d))!;
    const at = seen.get(next);
    if (at !== undefined) {
      return [...path.slice(at), next];
    }
    seen.set(next, path.length);
    path.push(next);
  }
}

// ---------------------------------------------------------------------------
// kind checking
// ---------------------------------------------------------------------------

export type Kind = "number" | "boolean";

/** Infer "number" or "boolean" without evaluating.
 *
 * Throws `UnboundVariable` on undeclared names and `KindMismatch` on
 * ill-kinded trees.
 */
export function kindOf(e: Expr, varKinds: ReadonlyMap<string, Kind>): Kind {
  switch (e.node) {
    case "num":
    case "const":
      return "number";
    case "bool":
      return "boolean";
    case "var": {
      const kind = varKinds.get(e.name);
      if (kind === undefined) throw new UnboundVariable(e.name, e.span);
      return kind;
    }
    case "unary": {
      const got = kindOf(e.operand, varKinds);
      const want: Kind = e.op === "neg" ? "number" : "boolean";
      if (got !== want) throw new KindMismatch(`'${e.op}' needs a ${want}, got a ${got}`, e.span);
      return want;
    }
    case "binary": {
      const left = kindOf(e.left, varKinds);
      const right = kindOf(e.right, varKinds);
      const op = e.op;
      let want: Kind;
      if ((ARITHMETIC_OPS as readonly string[]).includes(op)) {
        want = "number";
      } else if ((BOOLEAN_OPS as readonly string[]).includes(op)) {
        want = "boolean";
      } else if (op === "==" || op === "!=") {
        if (left !== right) {
          throw new KindMismatch(`'${op}' operands must have the same kind`, e.span);
        }
        return "boolean";
      } else {
        want = "number"; // < <= > >=
      }
      for (const got of [left, right]) {
        if (got !== want) throw new KindMismatch(`'${op}' needs ${want}s, got a ${got}`, e.span);
      }
      return (ARITHMETIC_OPS as readonly string[]).includes(op) ? "number" : "boolean";
    }
    case "call": {
      for (const arg of e.args) {
        if (kindOf(arg, varKinds) !== "number") {
          throw new KindMismatch(`argument of ${e.func} must be a number`, arg.span);
        }
      }
      return "number";
    }
  }
}
