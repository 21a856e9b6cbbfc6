/** Pure application state and transitions.
 *
 * The screen is a function of this state alone; controllers feed server
 * responses in with the sequence number of the request that caused
 * them, and responses older than the newest applied one are discarded.
 */

import type {
  HighlightResponse,
  InconsistentDetail,
  QueryClass,
  QueryResponse,
  Sign,
  TreeNodeJson,
} from "./types.js";

export interface DocView {
  docId: string;
  tree: TreeNodeJson;
  collapsed: Record<number, boolean>;
}

export type QueryPane =
  | { status: "empty" }
  | { status: "loading" }
  | { status: "ok"; body: QueryResponse }
  | { status: "inconsistent"; detail: InconsistentDetail }
  | { status: "error"; message: string };

export interface AppState {
  queryClass: QueryClass;
  docs: DocView[];
  annotations: Record<string, Record<number, Sign>>;
  pane: QueryPane;
  highlights: Record<string, number[]>;
  /** sequence number of the newest issued refresh */
  issuedSeq: number;
  /** sequence number of the newest applied response */
  appliedSeq: number;
}

export function initialState(): AppState {
  return {
    queryClass: "twig1",
    docs: [],
    annotations: {},
    pane: { status: "empty" },
    highlights: {},
    issuedSeq: 0,
    appliedSeq: 0,
  };
}

export function annotationOf(state: AppState, docId: string, node: number): Sign | null {
  return state.annotations[docId]?.[node] ?? null;
}

/** neutral -> + -> - -> neutral */
export function nextSign(current: Sign | null): Sign | null {
  if (current === null) return "+";
  if (current === "+") return "-";
  return null;
}

export type AnnotationRequest =
  | { kind: "put"; sign: Sign }
  | { kind: "delete" };

/** One click yields exactly one state-changing request. */
export function cycleAnnotation(
  state: AppState,
  docId: string,
  node: number,
): { state: AppState; request: AnnotationRequest } {
  const sign = nextSign(annotationOf(state, docId, node));
  const docAnnotations = { ...(state.annotations[docId] ?? {}) };
  if (sign === null) {
    delete docAnnotations[node];
  } else {
    docAnnotations[node] = sign;
  }
  return {
    state: {
      ...state,
      annotations: { ...state.annotations, [docId]: docAnnotations },
    },
    request: sign === null ? { kind: "delete" } : { kind: "put", sign },
  };
}

export function hasAnnotations(state: AppState): boolean {
  return Object.values(state.annotations).some(
    (per) => Object.keys(per).length > 0,
  );
}

export function docAdded(state: AppState, docId: string, tree: TreeNodeJson): AppState {
  return {
    ...state,
    docs: [...state.docs, { docId, tree, collapsed: {} }],
  };
}

export function collapseToggled(state: AppState, docId: string, node: number): AppState {
  return {
    ...state,
    docs: state.docs.map((d) =>
      d.docId === docId
        ? { ...d, collapsed: { ...d.collapsed, [node]: !d.collapsed[node] } }
        : d,
    ),
  };
}

export function classChosen(state: AppState, queryClass: QueryClass): AppState {
  return { ...state, queryClass, pane: { status: "loading" }, highlights: {} };
}

export function refreshIssued(state: AppState): { state: AppState; seq: number } {
  const seq = state.issuedSeq + 1;
  return { state: { ...state, issuedSeq: seq, pane: { status: "loading" } }, seq };
}

function fresh(state: AppState, seq: number): boolean {
  return seq > state.appliedSeq;
}

export function queryLoaded(state: AppState, seq: number, body: QueryResponse): AppState {
  if (!fresh(state, seq)) return state; // superseded response
  return { ...state, appliedSeq: seq, pane: { status: "ok", body } };
}

export function queryRejected(
  state: AppState,
  seq: number,
  detail: InconsistentDetail,
): AppState {
  if (!fresh(state, seq)) return state;
  return {
    ...state,
    appliedSeq: seq,
    pane: { status: "inconsistent", detail },
    highlights: {},
  };
}

export function queryFailed(state: AppState, seq: number, message: string): AppState {
  if (!fresh(state, seq)) return state;
  return { ...state, appliedSeq: seq, pane: { status: "error", message } };
}

export function highlightLoaded(
  state: AppState,
  seq: number,
  docId: string,
  body: HighlightResponse,
): AppState {
  if (seq < state.appliedSeq) return state; // from an older refresh
  return { ...state, highlights: { ...state.highlights, [docId]: body.nodes } };
}

export function paneText(state: AppState): string {
  switch (state.pane.status) {
    case "empty":
      return "";
    case "loading":
      return "…";
    case "ok":
      return state.pane.body.query ?? state.pane.body.queries.join("\n");
    case "inconsistent":
    case "error":
      return "";
  }
}
