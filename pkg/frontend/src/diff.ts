/** Ghost-text decorations for speculated fixes and completions.
 *
 * Hunks are rendered as decorations over the unchanged buffer: an insertion
 * shows grey ghost text at its site, a replacement additionally strikes the
 * old span. The buffer itself is never mutated.
 */

import type { DiffMessage, Hunk } from "./protocol.js";

export interface Decoration {
  offset: number; // position in the buffer
  removed: string; // struck-through span ("" for pure insertions)
  ghost: string; // grey inserted text ("" for pure deletions)
}

function locate(buffer: string, hunk: Hunk): { offset: number; removed: string } | null {
  if (hunk.old === "") {
    return null; // anchorless hunks cannot be placed as decorations
  }
  // Insertions arrive as context-carrying replacements: old is a prefix of
  // new (append) or a suffix (prepend). Decorate only the inserted part.
  const index = buffer.indexOf(hunk.old);
  if (index < 0) {
    return null;
  }
  return { offset: index, removed: hunk.old };
}

export function decorationsFor(buffer: string, diff: DiffMessage): Decoration[] {
  const out: Decoration[] = [];
  for (const hunk of diff.hunks) {
    const site = locate(buffer, hunk);
    if (site === null) {
      continue;
    }
    if (hunk.new.startsWith(hunk.old)) {
      out.push({
        offset: site.offset + hunk.old.length,
        removed: "",
        ghost: hunk.new.slice(hunk.old.length),
      });
    } else if (hunk.new.endsWith(hunk.old)) {
      out.push({
        offset: site.offset,
        removed: "",
        ghost: hunk.new.slice(0, hunk.new.length - hunk.old.length),
      });
    } else {
      out.push({ offset: site.offset, removed: site.removed, ghost: hunk.new });
    }
  }
  return out.sort((a, b) => a.offset - b.offset);
}

/** Badge list for columns added by over-projection, shown next to the diff. */
export function overProjectionBadges(diff: DiffMessage): string[] {
  return diff.overProjected.map(([block, column]) => `${block}: +${column}`);
}
