// Wire types for the live-play service.  The client performs no rule
// evaluation: everything rendered or enabled comes from these payloads.

export type Phase = "auction" | "play" | "finished";

export interface CallAction {
  type: "call";
  call: string; // "1C".."7NT", "PASS", "X", "XX"
}

export interface PlayAction {
  type: "play";
  card: string; // "QS", "TD", ...
  actingFor?: number; // 3 when the declarer plays the dummy
}

export type Action = CallAction | PlayAction;

export interface AuctionView {
  history: { seat: number; call: string }[];
  highBid: string | null;
  doubling: string;
  complete: boolean;
}

export interface ContractView {
  declarer: number;
  level: number;
  denomination: string;
  doubling: string;
}

export interface SettlementBreakdown {
  trickPoints: number;
  overtrickPoints: number;
  insult: number;
  slamBonus: number;
  honors: number;
  penalties: number;
}

export interface SchemeSettlement {
  scheme: string;
  declarer: number;
  made: boolean;
  perSeatDelta: number[];
  breakdown: SettlementBreakdown;
}

export interface DealSettlement {
  dealIndex: number;
  declarerTricks: number;
  perSeatTricks: number[];
  settlements: Record<string, SchemeSettlement>;
}

export interface SeatView {
  sessionId: string;
  stateVersion: number;
  seat: number;
  phase: Phase;
  dealIndex: number;
  opener: number;
  seats: string[];
  scores: Record<string, number[]>;
  lastSettlement: DealSettlement | null;
  legalActions: Action[];
  dummySeat: number;
  hand: string[];
  auction: AuctionView | null;
  dummy: string[] | null;
  trick: { seat: number; card: string }[];
  contract?: ContractView | null;
  perSeatTricks?: number[];
  playLog?: { trick: number; seat: number; card: string }[];
  finished?: boolean;
}

export interface ServerEvent {
  type: string;
  sessionId: string;
  seat: number | null;
  payload: Record<string, unknown>;
  stateVersion: number;
}

export interface EventBatch {
  stateVersion: number;
  events: ServerEvent[];
}

export interface RuleError {
  rule: string;
  message: string;
}

export function isPlayAction(action: Action): action is PlayAction {
  return action.type === "play";
}

export function isCallAction(action: Action): action is CallAction {
  return action.type === "call";
}
