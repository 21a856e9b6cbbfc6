/** Wire types of the session service, consumed verbatim. */

export type Sign = "+" | "-";

export type QueryClass = "path1" | "twig1" | "twig0";

export interface TreeNodeJson {
  id: number;
  label: string;
  children: TreeNodeJson[];
}

export interface UploadResponse {
  doc_id: string;
  tree: TreeNodeJson;
}

export interface QueryResponse {
  class: string;
  query: string | null;
  queries: string[];
  size: number;
  positives: number;
  negatives: number;
  consistent: boolean;
  via?: string;
}

export interface InconsistentDetail {
  error: string;
  positives?: number;
  negatives?: number;
  consistent?: boolean;
}

export interface HighlightResponse {
  doc: string;
  nodes: number[];
  matches: boolean;
}
