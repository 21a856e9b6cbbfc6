/** Orchestration: clicks become requests, responses become state.
 *
 * Every annotation click issues exactly one state-changing request and
 * then one refresh (query plus per-document highlights) tagged with a
 * sequence number; an older refresh landing after a newer one is
 * dropped by the state layer.
 */

import { InconsistentSample, ServiceClient } from "./api.js";
import {
  AppState,
  classChosen,
  collapseToggled,
  cycleAnnotation,
  docAdded,
  hasAnnotations,
  highlightLoaded,
  initialState,
  queryFailed,
  queryLoaded,
  queryRejected,
  refreshIssued,
} from "./state.js";
import type { QueryClass } from "./types.js";

export class AnnotatorController {
  state: AppState = initialState();
  private session: string | null = null;
  private listeners: Array<(s: AppState) => void> = [];

  constructor(private client: ServiceClient) {}

  onChange(listener: (s: AppState) => void): void {
    this.listeners.push(listener);
  }

  private setState(state: AppState): void {
    this.state = state;
    for (const listener of this.listeners) listener(state);
  }

  private async ensureSession(): Promise<string> {
    if (this.session === null) {
      this.session = await this.client.createSession(this.state.queryClass);
    }
    return this.session;
  }

  async addDocument(xml: string): Promise<void> {
    try {
      const session = await this.ensureSession();
      const doc = await this.client.uploadDocument(session, xml);
      this.setState(docAdded(this.state, doc.doc_id, doc.tree));
    } catch (err) {
      this.setState(queryFailed(this.state, this.state.issuedSeq + 1, String(err)));
    }
  }

  async clickNode(docId: string, node: number): Promise<void> {
    const session = await this.ensureSession();
    const { state, request } = cycleAnnotation(this.state, docId, node);
    this.setState(state);
    try {
      if (request.kind === "put") {
        await this.client.setAnnotation(session, docId, node, request.sign);
      } else {
        await this.client.clearAnnotation(session, docId, node);
      }
    } catch (err) {
      this.setState(queryFailed(this.state, this.state.issuedSeq + 1, String(err)));
      return;
    }
    await this.refresh();
  }

  toggleCollapse(docId: string, node: number): void {
    this.setState(collapseToggled(this.state, docId, node));
  }

  async chooseClass(queryClass: QueryClass): Promise<void> {
    this.setState(classChosen(this.state, queryClass));
    await this.refresh();
  }

  /** Re-fetch the query and highlights for the current annotations. */
  async refresh(): Promise<void> {
    if (!hasAnnotations(this.state)) {
      this.setState({ ...this.state, pane: { status: "empty" }, highlights: {} });
      return;
    }
    const session = await this.ensureSession();
    const { state, seq } = refreshIssued(this.state);
    this.setState(state);
    try {
      const query = await this.client.getQuery(session, this.state.queryClass);
      this.setState(queryLoaded(this.state, seq, query));
      if (this.state.appliedSeq !== seq) return; // superseded meanwhile
      for (const doc of this.state.docs) {
        const hl = await this.client.getHighlight(session, doc.docId);
        this.setState(highlightLoaded(this.state, seq, doc.docId, hl));
      }
    } catch (err) {
      if (err instanceof InconsistentSample) {
        this.setState(queryRejected(this.state, seq, err.detail));
      } else {
        this.setState(queryFailed(this.state, seq, String(err)));
      }
    }
  }
}
