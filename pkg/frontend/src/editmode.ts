/** Edit mode: optimistic drafts, revision-checked posts, rollback.
 *
 * A draft applies locally at once so the UI feels immediate; the server
 * then either confirms (we refetch the authoritative map) or rejects
 * with a conflict, in which case the local state rolls back and the
 * fresh map is fetched instead.
 */

import { ApiClient, ApiConflictError } from './api';
import type { ConceptMap, EditOp } from './types';

export type EditOutcome =
  | { status: 'applied'; revision: number; map: ConceptMap }
  | { status: 'conflict'; map: ConceptMap };

export function optimisticApply(map: ConceptMap, op: EditOp): ConceptMap {
  const draft: ConceptMap = JSON.parse(JSON.stringify(map));
  if (op.op === 'rename_concept') {
    const id = op.payload['id'] as string;
    const label = op.payload['label'] as string;
    const concept = draft.concepts.find((c) => c.id === id);
    if (concept) concept.label = label;
  } else if (op.op === 'delete_relation') {
    draft.relations = draft.relations.filter(
      (r) =>
        !(
          r.type === op.payload['type'] &&
          r.src_id === op.payload['src_id'] &&
          r.dst_id === op.payload['dst_id']
        ),
    );
  }
  // Other ops restructure derived state; those wait for the refetch.
  return draft;
}

export class EditController {
  private current: ConceptMap;

  constructor(
    private client: ApiClient,
    private videoId: string,
    initial: ConceptMap,
    private onRender: (map: ConceptMap) => void,
  ) {
    this.current = initial;
  }

  get map(): ConceptMap {
    return this.current;
  }

  async submit(op: Omit<EditOp, 'expected_revision'>): Promise<EditOutcome> {
    const before = this.current;
    const withRevision: EditOp = {
      ...op,
      expected_revision: before.revision ?? 0,
    };
    this.current = optimisticApply(before, withRevision);
    this.onRender(this.current);
    try {
      const { revision } = await this.client.postEdit(this.videoId, withRevision);
      this.current = await this.client.getMap(this.videoId);
      this.current.revision = revision;
      this.onRender(this.current);
      return { status: 'applied', revision, map: this.current };
    } catch (err) {
      if (err instanceof ApiConflictError) {
        // Roll back the optimistic state, then adopt the server's truth.
        this.current = before;
        this.onRender(this.current);
        this.current = await this.client.getMap(this.videoId);
        this.onRender(this.current);
        return { status: 'conflict', map: this.current };
      }
      this.current = before;
      this.onRender(this.current);
      throw err;
    }
  }
}
