/** Label text templates: literal text with `{expression}` placeholders.
 *
 * `"ratio = {C/D}"` renders the current value of `C/D` to the label's
 * decimal-places setting.  Braces do not nest and have no escape form.
 */

export class TemplateError extends Error {}

export type TemplateSegment = ["text" | "expr", string];

/** Split into ("text", literal) and ("expr", source) segments, in order. */
export function templateSegments(template: string): TemplateSegment[] {
  const segments: TemplateSegment[] = [];
  let rest = template;
  while (rest) {
    const openAt = rest.indexOf("{");
    let closeAt = rest.indexOf("}");
    if (openAt === -1) {
      if (closeAt !== -1) throw new TemplateError("unmatched '}' in template");
      segments.push(["text", rest]);
      break;
    }
    if (closeAt !== -1 && closeAt < openAt) {
      throw new TemplateError("unmatched '}' in template");
    }
    if (openAt > 0) {
      segments.push(["text", rest.slice(0, openAt)]);
    }
    closeAt = rest.indexOf("}", openAt);
    if (closeAt === -1) throw new TemplateError("unmatched '{' in template");
    const source = rest.slice(openAt + 1, closeAt);
    if (source.includes("{")) throw new TemplateError("nested '{' in template");
    if (!source.trim()) throw new TemplateError("empty placeholder in template");
    segments.push(["expr", source]);
    rest = rest.slice(closeAt + 1);
  }
  return segments;
}

/** Just the placeholder expression sources, in order of appearance. */
export function templateExpressions(template: string): string[] {
  return templateSegments(template)
    .filter(([kind]) => kind === "expr")
    .map(([, text]) => text);
}
